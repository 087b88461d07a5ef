import random

import pytest
from hypothesis import given, strategies as st

from albmod.errors import DomainError
from albmod.fields import GF, is_prime
from albmod.poly import Poly, factor, gcd, is_irreducible, irreducibles
from albmod.ratfun import RatFun
from albmod.snf import FiniteAbelianGroup, lattice_basis, mat_mul, p_group_from_counts, smith_normal_form

from conftest import poly

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (2, 3)]


# -- finite fields ------------------------------------------------------------


def test_is_prime_small():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_non_prime_characteristic_rejected():
    with pytest.raises(DomainError):
        GF(4)


@pytest.mark.parametrize("p,m", FIELDS)
def test_field_axioms_random(p, m):
    F = GF(p, m)
    rng = random.Random(p * 100 + m)
    for _ in range(10**4 // len(FIELDS)):
        a, b, c = (rng.randrange(F.order) for _ in range(3))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        if a:
            assert F.mul(a, F.inv(a)) == 1


def test_trace_examples(F4):
    # x encodes a root of the modulus t^2+t+1
    assert F4.trace(0) == 0
    assert F4.trace(2) == 1
    assert GF(3, 2).trace(1) == 2
    assert GF(2, 3).trace(1) == 1


@pytest.mark.parametrize("p,m", FIELDS)
def test_trace_is_sum_of_conjugates(p, m):
    F = GF(p, m)
    for a in F.elements():
        acc = 0
        for i in range(m):
            acc = F.add(acc, F.frobenius(a, i))
        assert acc == F.trace(a)
        assert acc < p


def test_generator_has_full_order(F4):
    g = F4.exp(1)
    powers = {F4.pow(g, k) for k in range(3)}
    assert powers == {1, 2, 3}


# -- polynomials and factorization ---------------------------------------------


def test_factor_examples(F2, F3):
    assert factor(poly(F2, 0, 1, 1)) == [(poly(F2, 0, 1), 1), (poly(F2, 1, 1), 1)]
    assert factor(poly(F2, 1, 1, 1)) == [(poly(F2, 1, 1, 1), 1)]
    assert factor(poly(F3, 0, 0, 0, 1)) == [(poly(F3, 0, 1), 3)]


def test_factor_zero_rejected(F2):
    with pytest.raises(DomainError):
        factor(Poly.zero(F2))


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2)])
def test_irreducible_counts(p, m):
    F = GF(p, m)
    q = F.order
    # necklace counts: q, (q^2-q)/2, (q^3-q)/3
    assert len(irreducibles(F, 1)) == q
    assert len(irreducibles(F, 2)) == (q * q - q) // 2
    assert len(irreducibles(F, 3)) == (q**3 - q) // 3


@given(st.integers(0, 10**6), st.sampled_from(FIELDS[:4]))
def test_factor_roundtrip(seed, pm):
    F = GF(*pm)
    rng = random.Random(seed)
    f = Poly(F, [rng.randrange(F.order) for _ in range(rng.randint(2, 10))])
    if not f:
        return
    facs = factor(f)
    acc = Poly.const(F, f.lc())
    for g, e in facs:
        assert g.is_monic() and is_irreducible(g)
        acc = acc * g**e
    assert acc == f
    assert len({g for g, _ in facs}) == len(facs)


@given(st.integers(0, 10**6))
def test_gcd_divides(seed):
    F = GF(3)
    rng = random.Random(seed)
    a = Poly(F, [rng.randrange(3) for _ in range(6)])
    b = Poly(F, [rng.randrange(3) for _ in range(5)])
    if not a or not b:
        return
    g = gcd(a, b)
    assert (a % g).is_zero() and (b % g).is_zero()


def test_ratfun_canonical_form(F2):
    f = RatFun(poly(F2, 0, 1, 1), poly(F2, 0, 1))
    assert f == RatFun(poly(F2, 1, 1))
    assert f.den.is_monic()
    assert RatFun(poly(F2, 1), poly(F2, 0, 1)).format() == "(1)/(t)"


@given(st.integers(0, 10**6))
def test_ratfun_field_axioms(seed):
    F = GF(3)
    rng = random.Random(seed)

    def rnd():
        while True:
            n = Poly(F, [rng.randrange(3) for _ in range(3)])
            d = Poly(F, [rng.randrange(3) for _ in range(3)])
            if n and d:
                return RatFun(n, d)

    a, b, c = rnd(), rnd(), rnd()
    assert a * (b + c) == a * b + a * c
    assert (a / b) * b == a
    assert a - a == RatFun.const(F, 0)


# -- Smith normal form ------------------------------------------------------------


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]])[0] == [1, 6]
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])[0] == [1, 1, 1]
    assert smith_normal_form([[0]])[0] == [0]


@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_transforms(M):
    diag, U, V = smith_normal_form(M)
    D = mat_mul(mat_mul(U, M), V)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert x == (diag[i] if i == j else 0)
    nz = [d for d in diag if d]
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    assert all(d >= 0 for d in diag)


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_snf_preserves_determinant(M):
    a, b, c = M
    det = (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
           + a[2] * (b[0] * c[1] - b[1] * c[0]))
    diag, _, _ = smith_normal_form(M)
    prod = 1
    for d in diag:
        prod *= d
    assert prod == abs(det)


def test_lattice_basis_and_group():
    rows = [[2, 0, 0], [0, 3, 0], [0, 0, 0], [4, 6, 0]]
    assert len(lattice_basis(rows, 3)) == 2
    group, free = FiniteAbelianGroup.from_relations(rows, 3)
    assert group.invariant_factors == (6,) and free == 1


def test_p_group_from_counts():
    # Z/4 x Z/2: |G[2]| = 4, |G[4]| = 8
    assert p_group_from_counts(2, [1, 4, 8]).invariant_factors == (2, 4)
    assert p_group_from_counts(3, [1, 3]).invariant_factors == (3,)


def test_group_rejects_bad_chain():
    with pytest.raises(ValueError):
        FiniteAbelianGroup((4, 6))
