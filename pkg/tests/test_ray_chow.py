import pytest

from albmod.curve import Divisor
from albmod.errors import DomainError
from albmod.fields import GF
from albmod.parse import parse_divisor
from albmod.places import Place
from albmod.ray_chow import (
    chow_group,
    degree_exactness,
    etale_part,
    global_fil_sections,
    ray_group,
    step_one_length,
    surjection_check,
    unipotent_part,
    universality_check,
)


def D_(text, p=2, m=1):
    return parse_divisor(text, GF(p, m))


# -- ray class groups -------------------------------------------------------------


@pytest.mark.parametrize(
    "text,p,factors",
    [
        ("2*inf", 2, [2]),
        ("2*(t) + inf", 3, [6]),
        ("3*(t)", 2, [4]),
        ("(t) + inf", 2, []),
        ("(t) + (t+1) + inf", 3, [2, 2]),
        ("4*inf", 2, [2, 4]),
        ("(t^2+t+1)", 2, [3]),
    ],
)
def test_ray_group_examples(text, p, factors):
    assert list(ray_group(D_(text, p)).invariant_factors) == factors


def test_ray_group_order_formula(F3):
    D = D_("2*(t^2+1) + 3*(t) + inf", 3)
    # (8 * 2 * 2) / 2 etale, times 9^1 * 3^2 unipotent
    assert ray_group(D).order == 16 * 81


def test_pieces(F2):
    z = Place.linear(F2, 0)
    assert unipotent_part(z, 3).invariant_factors == (4,)
    assert unipotent_part(z, 4).invariant_factors == (2, 4)
    assert etale_part(D_("(t) + (t^2+t+1)")).invariant_factors == (3,)


def test_empty_modulus_gives_trivial_group(F2):
    assert ray_group(Divisor.zero(F2)).order == 1
    with pytest.raises(DomainError):
        ray_group(-D_("inf"))


# -- Chow groups -----------------------------------------------------------------------


def test_chow_examples():
    pres = chow_group(D_("2*inf"), 3)
    assert list(pres.group.invariant_factors) == [2] and pres.stabilized
    assert chow_group(D_("(t) + inf"), 3).group.order == 1
    assert degree_exactness(pres)


def test_chow_bound_too_small():
    with pytest.raises(DomainError):
        chow_group(D_("3*(t)"), 2)


def test_chow_json():
    out = chow_group(D_("3*(t)")).to_json()
    assert out["invariant_factors"] == [4]
    assert out["stabilized"] and out["free_rank"] == 1
    assert out["history"][0]["bound"] == 3


@pytest.mark.parametrize("text,p", [("2*inf", 2), ("2*(t) + inf", 3), ("3*(t)", 2), ("(t) + (t+1) + inf", 2), ("2*(t^2+1)", 3)])
def test_universality(text, p):
    rep = universality_check(D_(text, p))
    assert rep["ok"], rep


def test_universality_over_F4():
    assert universality_check(D_("2*(t) + inf", 2, 2))["ok"]


# -- surjections ------------------------------------------------------------------------------


def test_surjection_examples():
    rep = surjection_check(D_("3*(t)"), D_("2*(t)"))
    assert rep["source"] == [4] and rep["target"] == [2] and rep["ok"]
    assert surjection_check(D_("2*(t) + 2*inf"), D_("2*(t)"))["ok"]
    same = surjection_check(D_("3*inf"), D_("3*inf"))
    assert same["image_order"] == same["target_order"]
    with pytest.raises(DomainError):
        surjection_check(D_("2*(t)"), D_("3*(t)"))


# -- global sections ------------------------------------------------------------------------


def test_sections_example():
    rep = global_fil_sections(D_("4*inf"), 2)
    assert rep["dims"] == [3, 5]
    assert rep["order"] == 2**8
    assert rep["brute_force_order"] == 2**8
    assert rep["ok"]


@pytest.mark.parametrize("n", range(0, 6))
def test_sections_r1(n):
    D = D_(f"{n}*inf", 3) if n else Divisor.zero(GF(3))
    assert global_fil_sections(D, 1)["dims"] == [n + 1]


def test_sections_with_finite_places():
    rep = global_fil_sections(D_("3*(t) + 2*(t+1)"), 2)
    assert rep["ok"] and rep["brute_force_ok"]


def test_step_one_length():
    assert step_one_length(D_("(t) + inf"), 2) == 0
    assert step_one_length(D_("2*(t) + inf"), 2) == 1
    assert step_one_length(D_("5*inf"), 2) == 3
    assert step_one_length(D_("4*inf", 3), 3) == 2
