"""Finite fields F_{p^m} and their finite extensions.

Elements are encoded as integers ``0 <= a < Q``: the base-p digits of ``a``
are the coordinates of the element over F_p.  For a tower ``E = F[x]/(f)``
the digits of an element of ``E`` are grouped in blocks of ``log_p |F|``,
block ``i`` holding the coefficient of ``x**i``.  Because addition is
digitwise, the encoding of ``F`` inside ``E`` is the identity on integers.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

from .errors import DomainError

MAX_FIELD_SIZE = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FiniteField:
    """A finite field given as ``base[x]/(modulus)``.

    ``base`` is ``None`` for the prime field F_p.  Use :func:`GF` for the
    standard fields and :meth:`extension` for residue fields of places.
    """

    def __init__(self, p: int, base: FiniteField | None = None, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.base = base
        if base is None:
            self.modulus = (0, 1)
            self.rel_degree = 1
            self.degree = 1
        else:
            if base.p != p:
                raise DomainError("characteristic mismatch")
            self.modulus = tuple(modulus)
            self.rel_degree = len(self.modulus) - 1
            self.degree = base.degree * self.rel_degree
        self.order = p ** self.degree
        if self.order > MAX_FIELD_SIZE:
            raise DomainError(f"field of size {self.order} exceeds the desk-scale limit")
        self._build_tables()

    # -- construction -----------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.degree):
            out.append(a % p)
            a //= p
        return out

    def _from_digits(self, ds) -> int:
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _slow_add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _slow_mul(self, a: int, b: int) -> int:
        # polynomial product over the base field, reduced by the modulus
        base = self.base
        q = base.order
        d = self.rel_degree
        av = [(a // q**i) % q for i in range(d)]
        bv = [(b // q**i) % q for i in range(d)]
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(av):
            if x == 0:
                continue
            for j, y in enumerate(bv):
                if y:
                    prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        mod = self.modulus
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c:
                for i in range(d):
                    if mod[i]:
                        prod[k - d + i] = base.sub(prod[k - d + i], base.mul(c, mod[i]))
                prod[k] = 0
        return sum(prod[i] * q**i for i in range(d))

    def _slow_pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._slow_mul(out, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return out

    def _build_tables(self):
        Q = self.order
        p = self.p
        if self.base is None:
            self._neg = [(-a) % p for a in range(p)]
            self._add = None
            g = next(g for g in range(1, p) if self._is_generator_int(g)) if p > 2 else 1
            self.generator = g
            exp = [1] * (Q - 1)
            for i in range(1, Q - 1):
                exp[i] = exp[i - 1] * g % p
        else:
            self._neg = [self._from_digits([(-x) % p for x in self._digits(a)]) for a in range(Q)]
            self._add = None
            if Q <= 1024 and p != 2:
                self._add = [[self._slow_add(a, b) for b in range(Q)] for a in range(Q)]
            self.generator = None
            fac = _prime_factors(Q - 1)
            candidates = [self.base.order] if self.rel_degree > 1 else []
            for g in candidates + list(range(1, Q)):
                if all(self._slow_pow(g, (Q - 1) // f) != 1 for f in fac):
                    self.generator = g
                    break
            exp = [1] * (Q - 1)
            for i in range(1, Q - 1):
                exp[i] = self._slow_mul(exp[i - 1], self.generator)
        self._exp = exp + exp
        self._log = [0] * Q
        for i, e in enumerate(exp):
            self._log[e] = i

    def _is_generator_int(self, g: int) -> bool:
        p = self.p
        return all(pow(g, (p - 1) // f, p) != 1 for f in _prime_factors(p - 1))

    # -- raw integer arithmetic -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.base is None:
            s = a + b
            return s - self.p if s >= self.p else s
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a][b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.base is None:
            return a * b % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def scalar(self, n: int) -> int:
        """Image of the integer ``n`` in the field."""
        return n % self.p

    def smul(self, n: int, a: int) -> int:
        n %= self.p
        if n == 0 or a == 0:
            return 0
        if self.base is None:
            return n * a % self.p
        if self.p == 2:
            return a
        return self._from_digits([d * n % self.p for d in self._digits(a)])

    def log(self, a: int) -> int:
        """Discrete logarithm to the fixed generator."""
        if a == 0:
            raise DomainError("log of zero")
        return self._log[a]

    def exp(self, k: int) -> int:
        return self._exp[k % (self.order - 1)]

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p ** times)

    def pth_root(self, a: int) -> int:
        return self.pow(a, self.order // self.p)

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, returned as an integer in ``range(p)``."""
        s = 0
        x = a
        for _ in range(self.degree):
            s = self.add(s, x)
            x = self.pow(x, self.p)
        assert s < self.p
        return s

    def relative_trace(self, a: int) -> int:
        """Trace down to ``self.base`` (the identity for the prime field)."""
        if self.base is None:
            return a
        s = 0
        x = a
        q = self.base.order
        for _ in range(self.rel_degree):
            s = self.add(s, x)
            x = self.pow(x, q)
        return s

    def relative_norm(self, a: int) -> int:
        if self.base is None:
            return a
        return self.pow(a, (self.order - 1) // (self.base.order - 1))

    def prime_basis(self) -> list[int]:
        """The F_p-basis of unit digit vectors ``p**i``."""
        return [self.p**i for i in range(self.degree)]

    def digits(self, a: int) -> list[int]:
        return self._digits(a)

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    def extension(self, modulus: tuple[int, ...]) -> FiniteField:
        """``self[x]/(modulus)`` for a monic irreducible ``modulus`` (low to high)."""
        return _extension(self, tuple(modulus))

    def __call__(self, a: int) -> FFElem:
        return FFElem(self, a)

    def zero(self) -> FFElem:
        return FFElem(self, 0)

    def one(self) -> FFElem:
        return FFElem(self, 1)

    def format(self, a: int) -> str:
        if self.base is None:
            return str(a)
        if a == 0:
            return "0"
        k = self.log(a)
        return "1" if k == 0 else f"g^{k}"

    def __repr__(self):
        if self.base is None:
            return f"GF({self.p})"
        if self.base.base is None and self is GF(self.p, self.degree):
            return f"GF({self.p}^{self.degree})"
        return f"{self.base!r}[x]/({self.modulus})"

    @property
    def characteristic(self) -> int:
        return self.p


@lru_cache(maxsize=None)
def _extension(base: FiniteField, modulus: tuple[int, ...]) -> FiniteField:
    return FiniteField(base.p, base, modulus)


def _poly_is_primitive(p: int, mod: tuple[int, ...]) -> bool:
    """Whether ``x`` generates ``(F_p[x]/mod)*``; ``mod`` is monic."""
    m = len(mod) - 1
    Q = p**m

    def mulx(v):
        top = v[-1]
        out = [0] + v[:-1]
        return [(out[i] - top * mod[i]) % p for i in range(m)]

    v = [1] + [0] * (m - 1)
    seen = 0
    for k in range(1, Q):
        v = mulx(v)
        if v == [1] + [0] * (m - 1):
            seen = k
            break
    return seen == Q - 1


@lru_cache(maxsize=None)
def conway_style_modulus(p: int, m: int) -> tuple[int, ...]:
    """First primitive monic polynomial of degree ``m`` over F_p.

    Candidates are scanned lexicographically in ``(c_{m-1}, ..., c_0)``, so
    the choice (and hence every element encoding) is fixed across runs.
    """
    for rev in product(range(p), repeat=m):
        low = tuple(reversed(rev))
        mod = low + (1,)
        if low[0] == 0:
            continue
        if _poly_is_primitive(p, mod):
            return mod
    raise DomainError(f"no primitive polynomial of degree {m} over F_{p}")


@lru_cache(maxsize=None)
def GF(p: int, m: int = 1) -> FiniteField:
    """The field with ``p**m`` elements, fixed modulus per ``(p, m)``."""
    if m < 1:
        raise DomainError("extension degree must be >= 1")
    prime = _prime_field(p)
    if m == 1:
        return prime
    return prime.extension(conway_style_modulus(p, m))


@lru_cache(maxsize=None)
def _prime_field(p: int) -> FiniteField:
    return FiniteField(p)


class FFElem:
    """An element of a :class:`FiniteField` with operator support."""

    __slots__ = ("field", "v")

    def __init__(self, field: FiniteField, v: int):
        self.field = field
        self.v = v

    @property
    def characteristic(self) -> int:
        return self.field.p

    def _coerce(self, other) -> int:
        if isinstance(other, FFElem):
            if other.field is not self.field:
                raise DomainError("elements of different fields")
            return other.v
        if isinstance(other, int):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.add(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.sub(self.v, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.sub(o, self.v))

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.v))

    def __mul__(self, other):
        if isinstance(other, int):
            return FFElem(self.field, self.field.smul(other, self.v))
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FFElem(self.field, self.field.div(self.v, o))

    def __pow__(self, e: int):
        return FFElem(self.field, self.field.pow(self.v, e))

    def inverse(self):
        return FFElem(self.field, self.field.inv(self.v))

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.field is other.field and self.v == other.v
        if isinstance(other, int):
            return self.v == self.field.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.v))

    def __bool__(self):
        return self.v != 0

    def is_zero(self) -> bool:
        return self.v == 0

    def trace(self) -> int:
        return self.field.trace(self.v)

    def __repr__(self):
        return self.field.format(self.v)
