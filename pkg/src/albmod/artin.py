"""Truncated polynomial rings ``A[eps]/(eps^N)`` used as Artin test rings."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainError
from .fields import FFElem, FiniteField

MAX_NILPOTENCY = 6


class EpsElem:
    """``sum_k c_k eps^k`` modulo ``eps^N`` over a coefficient ring ``A``.

    Coefficients are ring elements supporting ``+ - *`` and ``* 0``
    (``FFElem``, ``LaurentSeries``, ...).  ``N`` is the nilpotency degree.
    """

    __slots__ = ("c", "N")

    def __init__(self, coeffs, N: int):
        c = tuple(coeffs)
        if len(c) > N:
            c = c[:N]
        if len(c) < N:
            z = c[0] * 0
            c = c + (z,) * (N - len(c))
        self.c = c
        self.N = N

    @classmethod
    def scalar(cls, a, N: int) -> EpsElem:
        return cls((a,), N)

    @classmethod
    def eps(cls, one, N: int, k: int = 1) -> EpsElem:
        z = one * 0
        return cls([z] * k + [one], N)

    @property
    def characteristic(self) -> int:
        return self.c[0].characteristic

    def _zero(self):
        return self.c[0] * 0

    def is_zero(self) -> bool:
        return all(_iszero(a) for a in self.c)

    def __bool__(self):
        return not self.is_zero()

    def eps_valuation(self) -> int:
        for k, a in enumerate(self.c):
            if not _iszero(a):
                return k
        return self.N

    def nil_index(self) -> int | None:
        """Smallest ``k`` with ``self**k == 0`` guaranteed, or ``None`` if not nilpotent."""
        v = self.eps_valuation()
        if v == 0:
            return None
        return -(-self.N // v)

    def _lift(self, other):
        if isinstance(other, EpsElem):
            if other.N != self.N:
                raise DomainError("nilpotency degree mismatch")
            return other
        if isinstance(other, int):
            return EpsElem((self.c[0] * 0 + other,), self.N)
        return EpsElem((other,), self.N)

    def __add__(self, other):
        o = self._lift(other)
        return EpsElem([a + b for a, b in zip(self.c, o.c)], self.N)

    __radd__ = __add__

    def __neg__(self):
        return EpsElem([-a for a in self.c], self.N)

    def __sub__(self, other):
        o = self._lift(other)
        return EpsElem([a - b for a, b in zip(self.c, o.c)], self.N)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return EpsElem([a * other for a in self.c], self.N)
        o = self._lift(other)
        N = self.N
        out = [self._zero()] * N
        nz_a = [(i, a) for i, a in enumerate(self.c) if not _iszero(a)]
        nz_b = [(j, b) for j, b in enumerate(o.c) if not _iszero(b)]
        for i, a in nz_a:
            for j, b in nz_b:
                if i + j < N:
                    out[i + j] = out[i + j] + a * b
        return EpsElem(out, N)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self._lift(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def inverse(self) -> EpsElem:
        """Inverse of a unit (constant coefficient invertible)."""
        a0 = self.c[0]
        if _iszero(a0):
            raise ZeroDivisionError("not a unit in the truncated ring")
        inv0 = _inv(a0)
        # (a0 (1 + n))^-1 = a0^-1 sum (-n)^k
        n = self * inv0 - 1
        acc = self._lift(1)
        term = self._lift(1)
        for _ in range(1, self.N):
            term = term * (-n)
            acc = acc + term
        return acc * inv0

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def map(self, fn) -> EpsElem:
        return EpsElem([fn(a) for a in self.c], self.N)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._lift(other)
        if not isinstance(other, EpsElem):
            return NotImplemented
        return self.N == other.N and (self - other).is_zero()

    def __hash__(self):
        return hash((self.N, tuple(repr(a) for a in self.c)))

    def __repr__(self):
        return self.format()

    def format(self) -> str:
        terms = []
        for k, a in enumerate(self.c):
            if _iszero(a):
                continue
            s = a.format() if hasattr(a, "format") and not isinstance(a, FFElem) else repr(a)
            if k == 0:
                terms.append(s)
            else:
                e = "eps" if k == 1 else f"eps^{k}"
                terms.append(e if s == "1" else f"({s})*{e}")
        return " + ".join(terms) or "0"


def _iszero(a) -> bool:
    if isinstance(a, int):
        return a == 0
    return a.is_zero()


def _inv(a):
    if hasattr(a, "inverse"):
        return a.inverse()
    return 1 / a


@dataclass(frozen=True)
class ArtinRing:
    """``R = k[eps]/(eps^N)`` over a finite field ``k``."""

    field: FiniteField
    N: int

    def __post_init__(self):
        if not 1 <= self.N <= MAX_NILPOTENCY:
            raise DomainError(f"nilpotency degree must lie in 1..{MAX_NILPOTENCY}")

    def element(self, coeffs) -> EpsElem:
        F = self.field
        return EpsElem([FFElem(F, a % F.order if isinstance(a, int) else a) for a in coeffs] or [F.zero()], self.N)

    def zero(self) -> EpsElem:
        return self.element([0])

    def one(self) -> EpsElem:
        return self.element([1])

    def eps(self, k: int = 1) -> EpsElem:
        return EpsElem.eps(self.field.one(), self.N, k)

    def nilpotents(self):
        """All elements of the maximal ideal ``(eps)``, in a fixed order."""
        F = self.field
        for digits in itertools.product(range(F.order), repeat=self.N - 1):
            yield self.element((0,) + digits)

    def nilpotents_killed_by(self, e: int):
        """Nilpotents ``x`` with ``x**e == 0``."""
        for x in self.nilpotents():
            if (x**e).is_zero():
                yield x

    def __repr__(self):
        return f"{self.field!r}[eps]/(eps^{self.N})"
