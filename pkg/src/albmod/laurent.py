"""Truncated Laurent series ``k((s))`` over a finite field.

A series stores its coefficients from exponent ``start`` on and an absolute
precision ``prec``: every coefficient of exponent ``< prec`` is known.
``prec=None`` marks an exact Laurent polynomial.  Arithmetic propagates
precision pessimistically and any read of an uncertified coefficient
raises :class:`~albmod.errors.PrecisionError`.
"""
from __future__ import annotations

import math

from .errors import DomainError, PrecisionError
from .fields import FFElem, FiniteField

INF = math.inf

_KRONECKER_THRESHOLD = 256


def _conv(F: FiniteField, a, b) -> list[int]:
    """Coefficient list of the product of two coefficient lists."""
    if not a or not b:
        return []
    if F.base is None:
        p = F.p
        if len(a) * len(b) > _KRONECKER_THRESHOLD:
            return _kronecker(p, a, b)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return [v % p for v in out]
    out = [0] * (len(a) + len(b) - 1)
    add, mul = F.add, F.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return out


def _kronecker(p: int, a, b) -> list[int]:
    n = min(len(a), len(b))
    bits = (p - 1) ** 2 * n
    width = (bits.bit_length() + 8) // 8
    A = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in a), "little")
    B = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in b), "little")
    size = len(a) + len(b) - 1
    raw = (A * B).to_bytes(size * width, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") % p for i in range(size)]


class LaurentSeries:
    __slots__ = ("field", "start", "c", "prec")

    def __init__(self, field: FiniteField, start: int, coeffs, prec: int | None = None):
        self.field = field
        c = list(coeffs)
        if prec is not None:
            keep = max(0, prec - start)
            del c[keep:]
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        start += i
        c = c[i:]
        if prec is None:
            while c and c[-1] == 0:
                c.pop()
        if not c:
            start = 0 if prec is None else prec
        self.start = start
        self.c = tuple(c)
        self.prec = prec

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field, prec=None):
        return cls(field, 0, (), prec)

    @classmethod
    def one(cls, field):
        return cls(field, 0, (1,))

    @classmethod
    def monomial(cls, field, e: int, a: int = 1):
        return cls(field, e, (a,))

    @classmethod
    def from_dict(cls, field, terms: dict[int, int], prec=None):
        if not terms:
            return cls.zero(field, prec)
        lo, hi = min(terms), max(terms)
        c = [0] * (hi - lo + 1)
        for e, a in terms.items():
            c[e - lo] = a
        return cls(field, lo, c, prec)

    # -- properties -------------------------------------------------------

    @property
    def characteristic(self) -> int:
        return self.field.p

    @property
    def exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """Zero to the known precision (exactly zero when exact)."""
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def val_lower(self):
        """A certified lower bound for the valuation."""
        if self.c:
            return self.start
        return INF if self.prec is None else self.prec

    @property
    def valuation(self):
        if self.c:
            return self.start
        if self.prec is None:
            return INF
        raise PrecisionError(f"series is zero to precision O(s^{self.prec}); valuation unknown")

    @property
    def precision(self):
        """Relative precision (terms known past the leading one)."""
        if self.prec is None:
            return INF
        return self.prec - self.val_lower()

    @property
    def abs_prec(self):
        return INF if self.prec is None else self.prec

    def coefficient(self, e: int) -> int:
        if self.prec is not None and e >= self.prec:
            raise PrecisionError(f"coefficient of s^{e} not known (precision O(s^{self.prec}))")
        i = e - self.start
        return self.c[i] if 0 <= i < len(self.c) else 0

    def terms(self):
        """Nonzero ``(exponent, coefficient)`` pairs among the known terms."""
        return [(self.start + i, a) for i, a in enumerate(self.c) if a]

    def pole_order(self) -> int:
        """``max(0, -valuation)``; needs the principal part to be certified."""
        if self.c and self.start < 0:
            return -self.start
        if self.prec is not None and self.prec <= 0 and not self.c:
            raise PrecisionError("pole order not certified")
        return 0

    # -- parts ------------------------------------------------------------

    def principal_part(self) -> LaurentSeries:
        if self.prec is not None and self.prec < 0:
            raise PrecisionError("principal part not certified by the precision")
        return LaurentSeries(self.field, self.start, self.c[: max(0, -self.start)])

    def integral_part(self) -> LaurentSeries:
        if self.start >= 0:
            return self
        return LaurentSeries(self.field, 0, self.c[-self.start:], self.prec)

    def truncate(self, prec: int) -> LaurentSeries:
        new = prec if self.prec is None else min(prec, self.prec)
        return LaurentSeries(self.field, self.start, self.c, new)

    def is_integral(self) -> bool:
        return self.val_lower() >= 0 if self.c else True

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, LaurentSeries):
            if other.field is not self.field:
                raise DomainError("series over different fields")
            return other
        if isinstance(other, int):
            return LaurentSeries(self.field, 0, (self.field.scalar(other),))
        if isinstance(other, FFElem):
            return LaurentSeries(self.field, 0, (other.v,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        F = self.field
        prec = _minp(self.prec, o.prec)
        if not o.c:
            return LaurentSeries(F, self.start, self.c, prec)
        if not self.c:
            return LaurentSeries(F, o.start, o.c, prec)
        lo = min(self.start, o.start)
        hi = max(self.start + len(self.c), o.start + len(o.c))
        if prec is not None:
            hi = min(hi, prec)
            if hi <= lo:
                return LaurentSeries(F, 0, (), prec)
        out = [0] * (hi - lo)
        for i, a in enumerate(self.c):
            k = self.start + i - lo
            if k < len(out):
                out[k] = a
        for i, a in enumerate(o.c):
            k = o.start + i - lo
            if k < len(out) and a:
                out[k] = F.add(out[k], a)
        return LaurentSeries(F, lo, out, prec)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return LaurentSeries(F, self.start, [F.neg(a) for a in self.c], self.prec)

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
        F = self.field
        if isinstance(other, int):
            n = other % F.p
            if n == 0:
                return LaurentSeries(F, 0, ())
            return LaurentSeries(F, self.start, [F.smul(n, a) for a in self.c], self.prec)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if (not self.c and self.prec is None) or (not o.c and o.prec is None):
            return LaurentSeries(F, 0, ())
        va, vb = self.val_lower(), o.val_lower()
        prec = _minp(_addp(self.prec, vb), _addp(o.prec, va))
        if not self.c or not o.c:
            return LaurentSeries(F, 0, (), prec)
        a, b = self.c, o.c
        if prec is not None:
            room = prec - self.start - o.start
            if room <= 0:
                return LaurentSeries(F, 0, (), prec)
            a, b = a[:room], b[:room]
        return LaurentSeries(F, self.start + o.start, _conv(F, a, b), prec)

    __rmul__ = __mul__

    def inverse(self, rel_prec: int | None = None) -> LaurentSeries:
        """Multiplicative inverse.

        Exact non-monomial input needs ``rel_prec``; truncated input keeps its
        own relative precision (or ``rel_prec`` if that is smaller).
        """
        F = self.field
        if not self.c:
            if self.prec is None:
                raise ZeroDivisionError("inverse of zero series")
            raise PrecisionError("inverse of a series that is zero to precision")
        v = self.start
        n = self.precision
        if n == INF:
            if len(self.c) == 1:
                return LaurentSeries(F, -v, (F.inv(self.c[0]),))
            if rel_prec is None:
                raise PrecisionError("inverse of an exact non-monomial series needs rel_prec")
            n = rel_prec
        elif rel_prec is not None:
            n = min(n, rel_prec)
        a = list(self.c[:n]) + [0] * max(0, n - len(self.c))
        inv0 = F.inv(a[0])
        b = [0] * n
        b[0] = inv0
        # b_k = -inv0 * sum_{i=1..k} a_i b_{k-i}
        for k in range(1, n):
            s = 0
            for i in range(1, k + 1):
                if a[i] and b[k - i]:
                    s = F.add(s, F.mul(a[i], b[k - i]))
            b[k] = F.neg(F.mul(inv0, s))
        return LaurentSeries(F, -v, b, -v + n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        rel = None
        if o.prec is None and len(o.c) > 1:
            rel = self.precision if self.prec is not None else None
            if rel is None:
                raise PrecisionError("exact division by a non-monomial needs a truncated numerator")
        return self * o.inverse(rel)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = LaurentSeries.one(self.field)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def frobenius(self, times: int = 1) -> LaurentSeries:
        """Apply ``x -> x**(p**times)`` termwise (a ring map in char p)."""
        F = self.field
        q = F.p**times
        terms = {q * e: F.pow(a, q) for e, a in self.terms()}
        prec = None if self.prec is None else q * self.prec
        return LaurentSeries.from_dict(F, terms, prec)

    def derivative(self) -> LaurentSeries:
        F = self.field
        terms = {e - 1: F.smul(e, a) for e, a in self.terms() if e % F.p}
        prec = None if self.prec is None else self.prec - 1
        return LaurentSeries.from_dict(F, terms, prec)

    def residue(self) -> int:
        """Coefficient of ``s**-1`` (the residue of ``self * ds``)."""
        return self.coefficient(-1)

    def compose(self, phi: LaurentSeries, prec: int | None = None) -> LaurentSeries:
        """Substitute ``s = phi(s')`` where ``phi`` has valuation exactly 1.

        The result is known to absolute precision ``min(self.prec, prec)``;
        exact input with poles needs an explicit ``prec`` unless ``phi`` is
        a monomial.
        """
        if phi.valuation != 1:
            raise DomainError("substitution must have valuation 1")
        F = self.field
        target = _minp(self.prec, prec)
        terms = self.terms()
        if target is None and len(phi.c) > 1 and any(e < 0 for e, _ in terms):
            raise PrecisionError("composition with poles needs a target precision")
        out = LaurentSeries.zero(F, target)
        lowest = min((e for e, _ in terms), default=0)
        inv = None
        if lowest < 0:
            inv = phi.inverse(None if target is None else target - lowest + 1)
        for e, a in terms:
            term = phi**e if e >= 0 else inv ** (-e)
            if target is not None:
                term = term.truncate(target)
            out = out + term * a
        return out

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, LaurentSeries) else other
        if o is None:
            return NotImplemented
        if self.prec is None and o.prec is None:
            return self.start == o.start and self.c == o.c
        d = self - o
        return not d.c

    def __hash__(self):
        if self.prec is not None:
            raise TypeError("truncated series are unhashable")
        return hash((self.start, self.c))

    def __repr__(self):
        return self.format()

    def format(self, var: str = "s") -> str:
        F = self.field
        parts = []
        for e, a in self.terms():
            cs = F.format(a)
            if F.base is not None and cs != "1":
                cs = f"({cs})"
            if e == 0:
                parts.append(cs)
            else:
                mon = f"{var}" if e == 1 else f"{var}^{e}"
                parts.append(mon if cs == "1" else f"{cs}*{mon}")
        body = "+".join(parts) if parts else "0"
        if self.prec is not None:
            body += f"+O({var}^{self.prec})"
        return body


def _minp(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _addp(a, v):
    if a is None:
        return None
    if v == INF:
        return None
    return a + v


class LocalDifferential:
    """A local differential ``g * ds`` at a place."""

    __slots__ = ("g",)

    def __init__(self, g: LaurentSeries):
        self.g = g

    def residue(self) -> int:
        return self.g.residue()

    def __add__(self, other):
        return LocalDifferential(self.g + other.g)

    def __eq__(self, other):
        return isinstance(other, LocalDifferential) and self.g == other.g

    def __repr__(self):
        return f"({self.g.format()}) ds"


def residue(omega: LocalDifferential) -> int:
    """Coefficient of ``s**-1 ds``; raises if not certified."""
    return omega.residue()
