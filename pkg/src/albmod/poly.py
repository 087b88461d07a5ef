"""Univariate polynomials over a :class:`~albmod.fields.FiniteField`.

Coefficients are stored low degree first as raw field integers.
"""
from __future__ import annotations

import random
from functools import lru_cache

from .errors import DomainError
from .fields import FFElem, FiniteField


class Poly:
    __slots__ = ("field", "c")

    def __init__(self, field: FiniteField, coeffs=()):
        self.field = field
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def const(cls, field, a: int):
        return cls(field, (a,))

    @classmethod
    def monomial(cls, field, n: int, a: int = 1):
        return cls(field, (0,) * n + (a,))

    # -- basic properties -------------------------------------------------

    @property
    def characteristic(self) -> int:
        return self.field.p

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def coeff(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def monic(self) -> Poly:
        if not self.c:
            raise DomainError("zero polynomial has no monic associate")
        inv = self.field.inv(self.c[-1])
        return self.scale(inv)

    def scale(self, a: int) -> Poly:
        F = self.field
        return Poly(F, [F.mul(a, x) for x in self.c])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field is other.field and self.c == other.c
        if isinstance(other, int):
            return self.c == Poly(self.field, (self.field.scalar(other),)).c
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.c))

    def sort_key(self):
        return (self.degree, tuple(reversed(self.c)))

    # -- ring operations --------------------------------------------------

    def _lift(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.field is not self.field:
                raise DomainError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return Poly(self.field, (self.field.scalar(other),))
        if isinstance(other, FFElem):
            return Poly(self.field, (other.v,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        F = self.field
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            if y:
                out[i] = F.add(out[i], y)
        return Poly(F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly(F, [F.neg(x) for x in self.c])

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
            F = self.field
            return Poly(F, [F.smul(other, x) for x in self.c])
        o = self._lift(other)
        if o is None:
            return NotImplemented
        F = self.field
        a, b = self.c, o.c
        if not a or not b:
            return Poly(F, ())
        if F.base is None:
            p = F.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(F, [v % p for v in out])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative power of a polynomial")
        out = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.c)
        db = o.degree
        inv = F.inv(o.c[-1])
        if len(rem) <= db:
            return Poly(F, ()), self
        quo = [0] * (len(rem) - db)
        bc = o.c
        for k in range(len(rem) - 1, db - 1, -1):
            coef = rem[k]
            if coef == 0:
                continue
            m = F.mul(coef, inv)
            quo[k - db] = m
            for i in range(db + 1):
                if bc[i]:
                    rem[k - db + i] = F.sub(rem[k - db + i], F.mul(m, bc[i]))
        return Poly(F, quo), Poly(F, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Poly:
        q, r = divmod(self, other)
        if r:
            raise DomainError("division is not exact")
        return q

    def derivative(self) -> Poly:
        F = self.field
        return Poly(F, [F.smul(i, x) for i, x in enumerate(self.c)][1:])

    def __call__(self, a):
        """Evaluate at a field element (int of ``self.field`` or any extension)."""
        if isinstance(a, FFElem):
            E = a.field
            acc = 0
            for x in reversed(self.c):
                acc = E.add(E.mul(acc, a.v), x)
            return FFElem(E, acc)
        F = self.field
        acc = 0
        for x in reversed(self.c):
            acc = F.add(F.mul(acc, a), x)
        return acc

    def compose(self, other: Poly) -> Poly:
        out = Poly.zero(self.field)
        for x in reversed(self.c):
            out = out * other + Poly.const(self.field, x)
        return out

    def reverse(self, n: int | None = None) -> Poly:
        """``t**n * self(1/t)``, with ``n`` defaulting to the degree."""
        n = self.degree if n is None else n
        c = list(self.c) + [0] * (n + 1 - len(self.c))
        return Poly(self.field, reversed(c[: n + 1]))

    def pth_root(self) -> Poly:
        """Inverse of the Frobenius twist for a polynomial in ``t**p``."""
        F = self.field
        p = F.p
        if any(x for i, x in enumerate(self.c) if i % p):
            raise DomainError("polynomial is not a p-th power")
        return Poly(F, [F.pth_root(x) for x in self.c[::p]])

    def valuation_at(self, pi: Poly) -> int:
        """Multiplicity of the irreducible ``pi`` in ``self``."""
        if not self.c:
            raise DomainError("valuation of the zero polynomial")
        n = 0
        a = self
        while True:
            q, r = divmod(a, pi)
            if r:
                return n
            a = q
            n += 1

    def pow_mod(self, e: int, m: Poly) -> Poly:
        out = Poly.one(self.field) % m
        base = self % m
        while e:
            if e & 1:
                out = (out * base) % m
            base = (base * base) % m
            e >>= 1
        return out

    # -- formatting -------------------------------------------------------

    def __repr__(self):
        return self.format()

    def format(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        F = self.field
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            cs = F.format(a)
            if F.base is not None and cs != "1":
                cs = f"({cs})"
            if i == 0:
                terms.append(cs)
            else:
                mon = var if i == 1 else f"{var}^{i}"
                terms.append(mon if cs == "1" else f"{cs}*{mon}")
        return "+".join(terms)


def gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def xgcd(a: Poly, b: Poly):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.one(F)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = F.inv(r0.lc())
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = xgcd(a % m, m)
    if g.degree != 0:
        raise DomainError("not invertible modulo m")
    return s % m


# -- factorization ------------------------------------------------------------


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic squarefree factors with multiplicities (Yun, char p aware)."""
    F = f.field
    p = F.p
    f = f.monic()
    out: list[tuple[Poly, int]] = []
    if f.degree <= 0:
        return out
    df = f.derivative()
    if not df:
        for g, m in squarefree_decomposition(f.pth_root()):
            out.append((g, m * p))
        return out
    c = gcd(f, df)
    w = f // c
    i = 1
    while w.degree > 0:
        y = gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        for g, m in squarefree_decomposition(c.pth_root()):
            out.append((g, m * p))
    merged: dict[Poly, int] = {}
    for g, m in out:
        merged[g] = merged.get(g, 0) + m
    return list(merged.items())


def distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split a monic squarefree ``f`` into products of equal-degree irreducibles."""
    F = f.field
    q = F.order
    out = []
    x = Poly.x(F)
    h = x
    d = 0
    rest = f
    while rest.degree >= 2 * (d + 1):
        d += 1
        h = h.pow_mod(q, rest)
        g = gcd(rest, h - x)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus splitting of a product of degree-``d`` irreducibles."""
    F = f.field
    if f.degree == d:
        return [f]
    q = F.order
    n = f.degree
    while True:
        a = Poly(F, [rng.randrange(q) for _ in range(n)])
        if a.degree <= 0:
            continue
        if F.p == 2:
            # trace map a + a^2 + ... + a^(2^(kd-1)), q = 2^k
            k = F.degree
            t = a % f
            acc = t
            for _ in range(k * d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.pow_mod((q**d - 1) // 2, f) - Poly.one(F)
        g = gcd(f, b)
        if 0 < g.degree < n:
            return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


def factor(f: Poly, seed: int = 0) -> list[tuple[Poly, int]]:
    """Factor ``f`` into monic irreducibles with multiplicities.

    The leading coefficient is dropped; factors are sorted by degree then
    coefficients, so the output is deterministic.
    """
    if not f:
        raise DomainError("cannot factor the zero polynomial")
    return list(_factor_cached(f, seed))


@lru_cache(maxsize=1 << 16)
def _factor_cached(f: Poly, seed: int):
    rng = random.Random(seed)
    out = []
    for g, m in squarefree_decomposition(f):
        for h, d in distinct_degree(g):
            for irr in equal_degree(h, d, rng):
                out.append((irr.monic(), m))
    out.sort(key=lambda t: t[0].sort_key())
    return tuple(out)


def is_irreducible(f: Poly) -> bool:
    if f.degree <= 0:
        return False
    fac = factor(f)
    return len(fac) == 1 and fac[0][1] == 1


def monic_polys(field: FiniteField, degree: int):
    """All monic polynomials of exactly the given degree, in a fixed order."""
    q = field.order
    for idx in range(q**degree):
        c = []
        for _ in range(degree):
            c.append(idx % q)
            idx //= q
        yield Poly(field, c + [1])


def all_polys(field: FiniteField, max_degree: int):
    """All polynomials of degree <= max_degree, zero included."""
    q = field.order
    for idx in range(q ** (max_degree + 1)):
        c = []
        for _ in range(max_degree + 1):
            c.append(idx % q)
            idx //= q
        yield Poly(field, c)


@lru_cache(maxsize=None)
def irreducibles(field: FiniteField, degree: int) -> tuple[Poly, ...]:
    return tuple(f for f in monic_polys(field, degree) if is_irreducible(f))
