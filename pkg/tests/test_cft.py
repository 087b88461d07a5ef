import random

import pytest
from hypothesis import given, strategies as st

from albmod.cft import (
    as_conductor,
    cover_count_vs_dual,
    frobenius_symbol,
    lang_kernel_order,
    local_conductor,
    reciprocity_well_defined,
    swan_level,
    symbol_sum,
    wp_reduce,
)
from albmod.curve import Divisor, principal_divisor
from albmod.errors import DomainError
from albmod.fields import GF
from albmod.filtration import PrincipalPartClass
from albmod.laurent import LaurentSeries
from albmod.modulus import RationalMapData, modulus_of
from albmod.parse import parse_divisor, parse_ratfun
from albmod.places import Place
from albmod.ratfun import RatFun
from albmod.witt import WittVector

from conftest import poly, t_of


def D_(text, F):
    return parse_divisor(text, F)


# -- conductors ------------------------------------------------------------------------


def test_conductor_examples(F2):
    t = t_of(F2)
    inf, z = Place.infinity(F2), Place.linear(F2, 0)
    assert as_conductor(t) == Divisor(F2, {inf: 2})
    assert as_conductor(1 / t**3) == Divisor(F2, {z: 4})
    assert as_conductor(t**2 + t) == Divisor.zero(F2)
    assert as_conductor(RatFun.const(F2, 1)) == Divisor.zero(F2)


def test_conductor_uses_reduced_representative(F2):
    # t/(t+1)^2 = 1/(t+1) + 1/(t+1)^2 and 1/(t+1)^2 - 1/(t+1) lies in (F - 1) K
    t = t_of(F2)
    f = t / (t + 1) ** 2
    assert modulus_of(RationalMapData(F2, unip=[WittVector([f], 2)]))[0] == Divisor(F2, {Place.linear(F2, 1): 2})
    assert as_conductor(f) == Divisor.zero(F2)


def test_wp_reduce(F2, F3):
    s = lambda F, d: LaurentSeries.from_dict(F, d)  # noqa: E731
    assert wp_reduce(s(F2, {-6: 1})) == (3, s(F2, {-3: 1}))
    assert wp_reduce(s(F2, {-2: 1, -1: 1}))[0] == 0
    assert wp_reduce(s(F3, {-9: 1, -2: 1}))[0] == 2


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2)])
def test_swan_level_matches_reduction(p, m):
    F = GF(p, m)
    rng = random.Random(p + m)
    for _ in range(30):
        f = LaurentSeries.from_dict(F, {e: rng.randrange(F.order) for e in range(-rng.randint(1, 9), 0)})
        cls = PrincipalPartClass(p, (f.principal_part(),))
        assert swan_level(cls) == wp_reduce(f)[0]


@pytest.mark.parametrize("p", [2, 3])
def test_reduced_conductor_is_m_plus_one(p):
    F = GF(p)
    t = t_of(F)
    rng = random.Random(p)
    q = Place.linear(F, 0)
    for _ in range(10):
        m = rng.choice([k for k in range(1, 8) if k % p])
        f = RatFun.const(F, rng.randrange(1, p)) / t**m + RatFun.const(F, rng.randrange(p)) * t
        assert local_conductor(WittVector([f], p), q) == m + 1


def test_conductor_frobenius_invariant(F3):
    t = t_of(F3)
    g = 1 / t**2 + 1 / (t + 1)
    base = as_conductor(g)
    for nu in range(1, 3):
        assert as_conductor(g ** (3**nu)) == base


def test_witt_conductor(F2):
    t = t_of(F2)
    zero = RatFun.const(F2, 0)
    w = WittVector([1 / t, zero], 2)
    assert as_conductor(w) == Divisor(F2, {Place.linear(F2, 0): 3})
    w = WittVector([zero, 1 / t**2], 2)
    assert as_conductor(w) == Divisor(F2, {Place.linear(F2, 0): 2})


def test_conductor_rejects_bad_input(F2):
    with pytest.raises(DomainError):
        as_conductor(3)


# -- Frobenius symbols ------------------------------------------------------------------


def test_frobenius_examples(F2):
    t = t_of(F2)
    assert frobenius_symbol(t, Place.linear(F2, 1)) == 1
    assert frobenius_symbol(t, Place.linear(F2, 0)) == 0
    assert frobenius_symbol(t, Place(F2, poly(F2, 1, 1, 1))) == 1
    with pytest.raises(DomainError):
        frobenius_symbol(1 / t, Place.linear(F2, 0))


def test_symbol_sum_example(F2):
    t = t_of(F2)
    g = (t * t + t + 1) / (t * t + t)
    div = dict(principal_divisor(g).items())
    assert symbol_sum(t, div) == 0


@given(st.integers(0, 10**6))
def test_symbol_is_additive_and_wp_invariant(seed):
    F = GF(3)
    rng = random.Random(seed)
    t = t_of(F)
    f1 = RatFun.const(F, rng.randrange(3)) * t**2 + RatFun.const(F, rng.randrange(3)) / (t + 1)
    f2 = RatFun.const(F, rng.randrange(3)) * t + RatFun.const(F, rng.randrange(3))
    h = RatFun.const(F, rng.randrange(3)) * t + RatFun.const(F, rng.randrange(3)) / (t + 1)
    for q in [Place.linear(F, 0), Place.linear(F, 1), Place(F, poly(F, 1, 0, 1))]:
        a = frobenius_symbol(f1 + f2, q)
        assert a == (frobenius_symbol(f1, q) + frobenius_symbol(f2, q)) % 3
        assert frobenius_symbol(f1 + h**3 - h, q) == frobenius_symbol(f1, q)


# -- reciprocity -----------------------------------------------------------------------------


def test_reciprocity_examples(F2):
    t = t_of(F2)
    rep = reciprocity_well_defined(t, D_("2*inf", F2))
    assert rep["ok"] and rep["passes"] and rep["conductor_le_D"]
    rep = reciprocity_well_defined(t, D_("inf", F2))
    assert rep["ok"] and not rep["passes"]
    assert rep["violation"]["sum"] != 0
    assert reciprocity_well_defined(RatFun.const(F2, 1), D_("(t)", F2))["passes"]


def test_reciprocity_reduced_case(F2):
    t = t_of(F2)
    rep = reciprocity_well_defined(t / (t * t + 1), D_("inf", F2))
    assert rep["ok"] and rep["passes"]


@pytest.mark.parametrize("p", [2, 3])
def test_reciprocity_grid(p):
    F = GF(p)
    t = t_of(F)
    fs = [t, 1 / t, t**2 + 1 / (t + 1), 1 / t**2]
    Ds = ["2*inf", "3*(t)", "2*(t) + 3*inf", "(t) + (t+1) + inf"]
    for f in fs:
        for text in Ds:
            assert reciprocity_well_defined(f, D_(text, F), samples=8)["ok"]


def test_reciprocity_needs_effective(F2):
    with pytest.raises(DomainError):
        reciprocity_well_defined(t_of(F2), -D_("inf", F2))


# -- cover census -----------------------------------------------------------------------------


def test_cover_examples(F2):
    rep = cover_count_vs_dual(D_("2*inf", F2))
    assert (rep["geometric"], rep["constant"], rep["dual_dim"]) == (1, 1, 2)
    rep = cover_count_vs_dual(D_("inf", F2))
    assert (rep["geometric"], rep["constant"]) == (0, 1)
    rep = cover_count_vs_dual(Divisor.zero(F2))
    assert (rep["geometric"], rep["constant"], rep["ok"]) == (0, 1, True)


@pytest.mark.parametrize("text,p", [("4*inf", 2), ("3*(t) + inf", 3), ("2*(t^2+1)", 3), ("2*(t) + 2*(t+1)", 2)])
def test_cover_census(text, p):
    F = GF(p)
    assert cover_count_vs_dual(D_(text, F))["ok"]
    assert cover_count_vs_dual(D_(text, F), dual="ray")["ok"]


def test_lang_kernel(F2):
    assert lang_kernel_order(D_("2*inf", F2))["order"] == 2
    assert lang_kernel_order(D_("3*(t)", F2))["order"] == 4
    assert lang_kernel_order(D_("(t)", F2))["order"] == 1


def test_parse_roundtrip_in_reports(F3):
    f = parse_ratfun("t^2 + 2/(t+1)", F3)
    assert reciprocity_well_defined(f, D_("3*inf + 2*(t+1)", F3), samples=5)["f"] == f.format()
