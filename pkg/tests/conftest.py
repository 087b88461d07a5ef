import random

import pytest
from hypothesis import settings

from albmod.fields import GF
from albmod.poly import Poly
from albmod.ratfun import RatFun

settings.register_profile("default", max_examples=30, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def F2():
    return GF(2)


@pytest.fixture(scope="session")
def F3():
    return GF(3)


@pytest.fixture(scope="session")
def F4():
    return GF(2, 2)


def poly(F, *coeffs):
    """Polynomial from low-to-high coefficients."""
    return Poly(F, list(coeffs))


def t_of(F):
    return RatFun.t(F)


def rand_principal(F, rng, places, max_pole=3):
    """A rational function whose poles sit at the given finite places."""
    num = Poly(F, [rng.randrange(F.order) for _ in range(3)]) or Poly.one(F)
    den = Poly.one(F)
    for q in places:
        den = den * q.poly ** rng.randint(0, max_pole)
    return RatFun(num, den)


def rng_for(seed):
    return random.Random(seed)


def random_map(F, rng, r, max_pole=3, n_toric=None, n_unip=None):
    """A random rational map with poles at the two degree-one places (t), (t+1) and at infinity."""
    from albmod.modulus import RationalMapData
    from albmod.witt import WittVector

    t = RatFun.t(F)
    polys = [t, t + 1]
    n_toric = rng.randint(0, 1) if n_toric is None else n_toric
    n_unip = rng.randint(1, 2) if n_unip is None else n_unip
    toric = [polys[rng.randrange(2)] ** rng.choice([-1, 1]) for _ in range(n_toric)]

    def comp():
        f = RatFun.const(F, 0)
        for base in polys + [1 / t]:
            for e in range(1, rng.randint(0, max_pole) + 1):
                c = rng.randrange(F.order)
                if c:
                    f = f + RatFun.const(F, c) / base**e
        return f

    unip = [WittVector([comp() for _ in range(r)], F.p) for _ in range(n_unip)]
    return RationalMapData(F, toric=toric, unip=unip, r=r)


def random_divisor(F, rng, max_coeff=4):
    from albmod.curve import Divisor
    from albmod.places import Place

    places = [Place.linear(F, 0), Place.linear(F, 1), Place.infinity(F)]
    return Divisor(F, {q: rng.randint(0, max_coeff) for q in places})
