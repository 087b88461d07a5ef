"""Closed points of the projective line over F_q and local expansions."""
from __future__ import annotations

from functools import lru_cache

from .errors import DomainError, PrecisionError
from .fields import FFElem, FiniteField
from .laurent import LaurentSeries
from .poly import Poly, irreducibles, is_irreducible
from .ratfun import RatFun


class Place:
    """A monic irreducible ``poly`` over F_q, or the point at infinity (``poly=None``)."""

    __slots__ = ("field", "poly", "_key")

    def __init__(self, field: FiniteField, poly: Poly | None = None, *, check: bool = True):
        self.field = field
        if poly is not None:
            if poly.field is not field:
                raise DomainError("place polynomial over a different field")
            if check and not (poly.is_monic() and is_irreducible(poly)):
                raise DomainError(f"{poly} is not a monic irreducible polynomial")
        self.poly = poly
        self._key = (1, 0, ()) if poly is None else (0, poly.degree, tuple(reversed(poly.c)))

    @classmethod
    def infinity(cls, field: FiniteField) -> Place:
        return cls(field, None)

    @classmethod
    def linear(cls, field: FiniteField, a: int) -> Place:
        """The place ``t - a``."""
        return cls(field, Poly(field, (field.neg(a), 1)), check=False)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    @property
    def residue_field(self) -> FiniteField:
        if self.poly is None or self.poly.degree == 1:
            return self.field
        return self.field.extension(self.poly.c)

    @property
    def norm(self) -> int:
        """``|k(q)|``."""
        return self.field.order ** self.degree

    def theta(self) -> int:
        """Image of ``t`` in ``k(q)`` (finite places only)."""
        if self.poly is None:
            raise DomainError("t is not regular at infinity")
        if self.poly.degree == 1:
            return self.field.neg(self.poly.c[0])
        return self.field.order  # the class of x in F_q[x]/(poly)

    def uniformizer(self) -> RatFun:
        if self.poly is None:
            return RatFun.t(self.field).inverse()
        return RatFun.from_poly(self.poly)

    def valuation(self, f: RatFun) -> int | float:
        if not f:
            return float("inf")
        if self.poly is None:
            return f.den.degree - f.num.degree
        v = 0
        if f.num.degree >= self.poly.degree:
            v += _mult(f.num, self.poly)
        if f.den.degree >= self.poly.degree:
            v -= _mult(f.den, self.poly)
        return v

    def reduce(self, f: RatFun) -> int:
        """Value of a function regular at this place, as an element of ``k(q)``."""
        v = self.valuation(f)
        if v < 0:
            raise DomainError(f"{f} has a pole at {self}")
        if v > 0:
            return 0
        if self.poly is None:
            k = self.field
            return k.div(f.num.lc(), f.den.lc())
        E = self.residue_field
        th = E(self.theta())
        return (f.num(th) / f.den(th)).v

    def expand(self, f: RatFun, rel_prec: int) -> LaurentSeries:
        """Expansion of ``f`` in the uniformizer, ``rel_prec`` terms past the lead."""
        return expand_at_place(f, self, rel_prec)

    def sort_key(self):
        return self._key

    def __lt__(self, other):
        return self._key < other._key

    def __eq__(self, other):
        return isinstance(other, Place) and self.field is other.field and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.poly is None:
            return "inf"
        return f"({self.poly.format()})"


def _mult(f: Poly, pi: Poly) -> int:
    return f.valuation_at(pi) if f else 0


@lru_cache(maxsize=None)
def places_of_degree(field: FiniteField, d: int) -> tuple[Place, ...]:
    out = tuple(Place(field, f, check=False) for f in irreducibles(field, d))
    if d == 1:
        out = out + (Place.infinity(field),)
    return out


def places_up_to_degree(field: FiniteField, bound: int) -> list[Place]:
    out: list[Place] = []
    for d in range(1, bound + 1):
        out.extend(places_of_degree(field, d))
    return sorted(out)


def count_places(q: int, d: int) -> int:
    """Number of degree-``d`` places of the projective line over F_q."""
    from .artin_hasse import mobius

    n = sum(mobius(d // e) * q**e for e in range(1, d + 1) if d % e == 0) // d
    return n + (1 if d == 1 else 0)


# -- local expansions -------------------------------------------------------


def _poly_at_series(f: Poly, T: LaurentSeries) -> LaurentSeries:
    """Horner evaluation; coefficients of F_q embed into k(q) as integers."""
    E = T.field
    acc = LaurentSeries.zero(E)
    for a in reversed(f.c):
        acc = acc * T + LaurentSeries(E, 0, (a,))
    return acc


@lru_cache(maxsize=4096)
def t_expansion(place: Place, prec: int) -> LaurentSeries:
    """The series ``T(s)`` with ``pi(T) = s`` and ``T(0) = theta``, to ``O(s^prec)``."""
    if place.poly is None:
        raise DomainError("use 1/s at infinity")
    E = place.residue_field
    th = place.theta()
    if place.poly.degree == 1:
        return LaurentSeries(E, 0, (th, 1))
    pi = place.poly
    dpi = pi.derivative()
    s = LaurentSeries.monomial(E, 1)
    T = LaurentSeries(E, 0, (th,), 1)
    cur = 1
    while cur < prec:
        cur = min(2 * cur, prec)
        Tw = LaurentSeries(E, T.start, T.c, cur)
        num = _poly_at_series(pi, Tw) - s
        den = _poly_at_series(dpi, Tw)
        T = (Tw - num / den).truncate(cur)
    return T


def expand_at_place(f: RatFun, place: Place, rel_prec: int) -> LaurentSeries:
    """Laurent expansion of ``f`` at ``place`` in its standard uniformizer.

    The uniformizer is the place polynomial at finite places and ``1/t`` at
    infinity.  The result has valuation ``val_q(f)`` and relative precision
    ``rel_prec``.
    """
    if rel_prec < 1:
        raise DomainError("precision must be >= 1")
    E = place.residue_field
    if not f:
        return LaurentSeries.zero(E)
    if place.poly is None:
        n, d = f.num, f.den
        v = d.degree - n.degree
        rn = LaurentSeries(E, 0, tuple(reversed(n.c)))
        rd = LaurentSeries(E, 0, tuple(reversed(d.c)))
        rn = rn.truncate(rel_prec)
        out = rn / rd
        return LaurentSeries(E, out.start + v, out.c, out.prec + v)
    vn = place.valuation(RatFun.from_poly(f.num))
    vd = place.valuation(RatFun.from_poly(f.den))
    A = rel_prec + max(vn, vd)
    T = t_expansion(place, A)
    num = _poly_at_series(f.num, T).truncate(A)
    den = _poly_at_series(f.den, T).truncate(A)
    out = num / den
    if out.precision < rel_prec:
        raise PrecisionError("internal: expansion lost precision")
    return out.truncate(out.val_lower() + rel_prec)


def dt_ds(place: Place, prec: int) -> LaurentSeries:
    """``dt/ds`` for the standard uniformizer ``s`` at ``place``."""
    E = place.residue_field
    if place.poly is None:
        # t = 1/s
        return LaurentSeries.monomial(E, -2, E.neg(1))
    return t_expansion(place, prec + 1).derivative()


def global_residue(g: RatFun, place: Place) -> int:
    """Residue at ``place`` of the differential ``g dt``, in ``k(q)``."""
    v = place.valuation(g)
    if place.poly is None:
        # g dt = -g(1/s) s^-2 ds
        if v >= 2:
            return 0
        need = max(1, 2 - v)
        ser = expand_at_place(g, place, need + 1)
        return (ser * dt_ds(place, 0)).residue()
    if v >= 0:
        return 0
    ser = expand_at_place(g, place, -v + 1)
    return (ser * dt_ds(place, -v + 1)).residue()


def as_elem(place: Place, a: int) -> FFElem:
    return FFElem(place.residue_field, a)
