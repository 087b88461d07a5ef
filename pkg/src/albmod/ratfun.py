"""Rational functions in one variable over a finite field."""
from __future__ import annotations

from .errors import DomainError
from .fields import FFElem, FiniteField
from .poly import Poly, gcd


class RatFun:
    """Reduced fraction ``num/den`` with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, _reduced: bool = False):
        F = num.field
        if den is None:
            den = Poly.one(F)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num:
                den = Poly.one(F)
            else:
                g = gcd(num, den)
                if g.degree > 0:
                    num, den = num // g, den // g
            lc = den.lc()
            if lc != 1:
                inv = F.inv(lc)
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, f: Poly) -> RatFun:
        return cls(f, Poly.one(f.field), _reduced=True)

    @classmethod
    def const(cls, field: FiniteField, a: int) -> RatFun:
        return cls.from_poly(Poly.const(field, a))

    @classmethod
    def t(cls, field: FiniteField) -> RatFun:
        return cls.from_poly(Poly.x(field))

    @property
    def field(self) -> FiniteField:
        return self.num.field

    @property
    def characteristic(self) -> int:
        return self.field.p

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def _lift(self, other):
        if isinstance(other, RatFun):
            if other.field is not self.field:
                raise DomainError("rational functions over different fields")
            return other
        if isinstance(other, (Poly, int, FFElem)):
            p = Poly.one(self.field) * other if not isinstance(other, Poly) else other
            return RatFun.from_poly(p)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return RatFun(self.num * other, self.den)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RatFun:
        if not self.num:
            raise ZeroDivisionError("inverse of the zero function")
        return RatFun(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFun(self.num**e, self.den**e, _reduced=True)

    def derivative(self) -> RatFun:
        n, d = self.num, self.den
        return RatFun(n.derivative() * d - n * d.derivative(), d * d)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, RatFun) else other
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return self.format()

    def format(self, var: str = "t") -> str:
        n = self.num.format(var)
        if self.den.degree == 0:
            return n
        return f"({n})/({self.den.format(var)})"
