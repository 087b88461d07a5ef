"""Divisors, Riemann-Roch spaces and local symbols on the projective line."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DomainError
from .fields import FiniteField
from .places import Place, global_residue, places_of_degree
from .poly import Poly, factor, gcd, inverse_mod
from .ratfun import RatFun


class Divisor:
    """A finite formal sum ``sum n_q * q`` of places of P^1 over one field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs=None):
        self.field = field
        out = {}
        for q, n in (coeffs or {}).items():
            if q.field is not field:
                raise DomainError("place over a different field")
            if n:
                out[q] = out.get(q, 0) + n
        self.coeffs = {q: n for q, n in sorted(out.items()) if n}

    @classmethod
    def zero(cls, field) -> Divisor:
        return cls(field, {})

    @classmethod
    def point(cls, q: Place, n: int = 1) -> Divisor:
        return cls(q.field, {q: n})

    def __getitem__(self, q: Place) -> int:
        return self.coeffs.get(q, 0)

    def items(self):
        return self.coeffs.items()

    @property
    def support(self) -> list[Place]:
        return list(self.coeffs)

    @property
    def degree(self) -> int:
        return sum(n * q.degree for q, n in self.coeffs.items())

    def is_effective(self) -> bool:
        return all(n >= 0 for n in self.coeffs.values())

    def is_zero(self) -> bool:
        return not self.coeffs

    def reduced(self) -> Divisor:
        """``D_red``: the support with multiplicity one."""
        return Divisor(self.field, {q: 1 for q in self.coeffs})

    def floor_div(self, m: int) -> Divisor:
        """``floor(D/m)``, the largest ``E`` with ``m*E <= D`` (effective ``D``)."""
        return Divisor(self.field, {q: n // m for q, n in self.coeffs.items()})

    def _check(self, other):
        if not isinstance(other, Divisor) or other.field is not self.field:
            raise DomainError("divisors over different fields")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for q, n in other.coeffs.items():
            out[q] = out.get(q, 0) + n
        return Divisor(self.field, out)

    def __neg__(self):
        return Divisor(self.field, {q: -n for q, n in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return Divisor(self.field, {q: k * n for q, n in self.coeffs.items()})

    __rmul__ = __mul__

    def __le__(self, other):
        self._check(other)
        return (other - self).is_effective()

    def __ge__(self, other):
        return other <= self

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __repr__(self):
        return self.format()

    def format(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for q, n in self.coeffs.items():
            parts.append(f"{n}*{q!r}")
        return " + ".join(parts).replace("+ -", "- ")


def support_places(f: RatFun) -> list[Place]:
    """Zeros and poles of a nonzero rational function, sorted."""
    if not f:
        raise DomainError("the zero function has no divisor")
    out = set()
    for part in (f.num, f.den):
        if part.degree > 0:
            for g, _ in factor(part):
                out.add(Place(f.field, g, check=False))
    if f.num.degree != f.den.degree:
        out.add(Place.infinity(f.field))
    return sorted(out)


def principal_divisor(f: RatFun) -> Divisor:
    F = f.field
    if not f:
        raise DomainError("the zero function has no divisor")
    out: dict[Place, int] = {}
    if f.num.degree > 0:
        for g, e in factor(f.num):
            out[Place(F, g, check=False)] = e
    if f.den.degree > 0:
        for g, e in factor(f.den):
            q = Place(F, g, check=False)
            out[q] = out.get(q, 0) - e
    deg_inf = f.den.degree - f.num.degree
    if deg_inf:
        out[Place.infinity(F)] = deg_inf
    return Divisor(F, out)


def congruent_one_mod(f: RatFun, D: Divisor) -> bool:
    """``val_q(1 - f) >= n_q`` for every ``q`` in the support of ``D``."""
    if not f:
        raise DomainError("f must be nonzero")
    g = RatFun.const(f.field, 1) - f
    return all(q.valuation(g) >= n for q, n in D.items())


# -- Riemann-Roch spaces ---------------------------------------------------------


@dataclass(frozen=True)
class RRSpace:
    """``L(D) = {f : div(f) + D >= 0}`` with an explicit F_q-basis."""

    divisor: Divisor
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, f: RatFun) -> bool:
        if not f:
            return True
        return (principal_divisor(f) + self.divisor).is_effective()


def _finite_part(D: Divisor, sign: int) -> Poly:
    F = D.field
    out = Poly.one(F)
    for q, n in D.items():
        if not q.is_infinite and n * sign > 0:
            out = out * q.poly ** (n * sign)
    return out


def riemann_roch_space(D: Divisor) -> RRSpace:
    """Basis ``Pi_- t^i / Pi_+`` for ``0 <= i <= deg D``."""
    F = D.field
    pos = _finite_part(D, 1)
    neg = _finite_part(D, -1)
    basis = []
    for i in range(D.degree + 1):
        basis.append(RatFun(neg * Poly.monomial(F, i), pos))
    return RRSpace(D, tuple(basis))


def rr_dimension(D: Divisor) -> int:
    return max(D.degree + 1, 0)


# -- local symbols ----------------------------------------------------------------


def local_symbol_Gm(g: RatFun, f: RatFun, q: Place) -> int:
    """Tame symbol ``(-1)^(v(g)v(f)) g^v(f) / f^v(g)`` at ``q``, in ``k(q)*``."""
    if not g or not f:
        raise DomainError("tame symbol of the zero function")
    vg, vf = q.valuation(g), q.valuation(f)
    h = g**vf / f**vg
    val = q.reduce(h)
    E = q.residue_field
    if (vg * vf) % 2:
        val = E.neg(val)
    return val


def local_symbol_Ga(g: RatFun, f: RatFun, q: Place) -> int:
    """``Tr_{k(q)/F_p} Res_q(g df/f)`` in F_p."""
    if not f:
        raise DomainError("f must be nonzero")
    if not g:
        return 0
    omega = g * f.derivative() / f
    res = global_residue(omega, q)
    return q.residue_field.trace(res)


def norm_to_base(q: Place, a: int) -> int:
    """``N_{k(q)/F_q}`` of an element of ``k(q)``."""
    E = q.residue_field
    return a if E is q.field else E.relative_norm(a)


def reciprocity_sums(g: RatFun, f: RatFun) -> tuple[int, int]:
    """``(sum_q Tr Res_q(g df/f), prod_q N(tame symbol))`` over all relevant places.

    Both are trivial (``0`` and ``1``) by the reciprocity laws.
    """
    F = f.field
    places = set(support_places(f))
    if g:
        places |= set(support_places(g))
    omega = g * f.derivative() / f if g else None
    if omega:
        places |= set(support_places(omega))
    places.add(Place.infinity(F))
    add = 0
    mul = 1
    for q in sorted(places):
        if g:
            add = (add + local_symbol_Ga(g, f, q)) % F.p
            mul = F.mul(mul, norm_to_base(q, local_symbol_Gm(g, f, q)))
    return add, mul


# -- test-function generators ----------------------------------------------------


def random_ratfun(field: FiniteField, rng: random.Random, max_degree: int = 4, nonzero: bool = True) -> RatFun:
    while True:
        num = Poly(field, [rng.randrange(field.order) for _ in range(rng.randint(1, max_degree + 1))])
        den = Poly(field, [rng.randrange(field.order) for _ in range(rng.randint(1, max_degree + 1))])
        if den and (num or not nonzero):
            return RatFun(num, den)


def unit_congruent_one(D: Divisor, zeros: Divisor | None = None, rng: random.Random | None = None, extra_degree: int = 1) -> RatFun:
    """A function ``f == 1 mod D`` vanishing on the finite part of ``zeros``.

    Chinese remaindering: with ``Pi = prod pi_q^{n_q}`` over finite
    ``q in D`` and ``Z`` the finite part of ``zeros``, choose a monic ``d``
    prime to ``Pi*Z`` and ``n = d + Pi*h`` with ``n == 0 mod Z``.  The degree
    of ``d`` is raised until the condition at infinity holds.
    """
    F = D.field
    rng = rng or random.Random(0)
    Pi = _finite_part(D, 1)
    Z = _finite_part(zeros, 1) if zeros is not None else Poly.one(F)
    n_inf = D[Place.infinity(F)]
    base = Pi.degree + Z.degree + n_inf + extra_degree
    for _ in range(1000):
        d = Poly(F, [rng.randrange(F.order) for _ in range(base)] + [1])
        if Pi.degree > 0 and (d % Pi).is_zero():
            continue
        if gcd(d, Pi * Z).degree > 0:
            continue
        if Z.degree > 0:
            # Pi*h == -d mod Z
            h = (-(d % Z)) * inverse_mod(Pi % Z, Z) % Z
        else:
            h = Poly(F, [rng.randrange(F.order) for _ in range(max(0, base - Pi.degree - n_inf))])
        n = d + Pi * h
        if not n:
            continue
        f = RatFun(n, d)
        if congruent_one_mod(f, D):
            return f
    raise DomainError("weak approximation search failed")


def places_off(field: FiniteField, bound: int, avoid) -> list[Place]:
    avoid = set(avoid)
    out = []
    for d in range(1, bound + 1):
        out.extend(q for q in places_of_degree(field, d) if q not in avoid)
    return sorted(out)
