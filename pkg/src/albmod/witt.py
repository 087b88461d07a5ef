"""p-typical Witt vectors of finite length over an arbitrary coefficient ring.

Components may be Python ``int``/``Fraction`` (characteristic 0, used as a
ghost-component oracle) or any of the package's characteristic-p element
types.  Addition, subtraction and multiplication evaluate the universal
integer polynomials, which are built once per ``(p, r)`` and checked for
integrality on construction.

Storage order is standard: ``w[0]`` is the Teichmuller component.  The
filtration literature writes vectors as ``(f_{r-1}, ..., f_0)``; the two
indexings are related by ``f_i = w[r-1-i]`` (positions coincide).
"""
from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .fields import is_prime

MAX_LENGTH = 4
MAX_PRIME = 7

# -- sparse integer polynomials -------------------------------------------------

# A polynomial is a dict mapping exponent tuples to nonzero ints.


def _padd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _ppow(a: dict, n: int, nvars: int) -> dict:
    out = {(0,) * nvars: 1}
    base = a
    while n:
        if n & 1:
            out = _pmul(out, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return out


def _pscale(a: dict, c: int) -> dict:
    return {e: v * c for e, v in a.items()} if c else {}


def _pdiv_exact(a: dict, d: int) -> dict:
    out = {}
    for e, v in a.items():
        if v % d:
            raise ArithmeticError(f"coefficient {v} of {e} not divisible by {d}: integrality fails")
        out[e] = v // d
    return out


def _var(i: int, nvars: int, power: int = 1) -> dict:
    e = [0] * nvars
    e[i] = power
    return {tuple(e): 1}


class UniversalWittPolys:
    """Sum, difference and product polynomials for ``W_r`` at the prime ``p``.

    Variables are ``x_0..x_{r-1}, y_0..y_{r-1}`` (exponent tuples of length
    ``2r``).  ``S[n]``, ``D[n]``, ``P[n]`` satisfy the ghost identities
    ``Phi_n(S) = Phi_n(x) + Phi_n(y)``, ``Phi_n(D) = Phi_n(x) - Phi_n(y)``,
    ``Phi_n(P) = Phi_n(x) * Phi_n(y)``.
    """

    def __init__(self, p: int, r: int):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if not 1 <= r <= MAX_LENGTH:
            raise DomainError(f"Witt length must lie in 1..{MAX_LENGTH}")
        if p > MAX_PRIME:
            raise DomainError(f"primes above {MAX_PRIME} exceed the configured desk scale")
        self.p, self.r = p, r
        nv = 2 * r
        self.nvars = nv
        self.S = self._build(lambda n: _padd(self.ghost_x(n), self.ghost_y(n)))
        self.D = self._build(lambda n: _padd(self.ghost_x(n), self.ghost_y(n), -1))
        self.P = self._build(lambda n: _pmul(self.ghost_x(n), self.ghost_y(n)))
        # negation: D(0, y)
        self.N = [{e: c for e, c in d.items() if not any(e[:r])} for d in self.D]
        self._tries: dict = {}

    def ghost_x(self, n: int) -> dict:
        p, nv = self.p, self.nvars
        out: dict = {}
        for i in range(n + 1):
            out = _padd(out, _pscale(_var(i, nv, p ** (n - i)), p**i))
        return out

    def ghost_y(self, n: int) -> dict:
        p, nv, r = self.p, self.nvars, self.r
        out: dict = {}
        for i in range(n + 1):
            out = _padd(out, _pscale(_var(r + i, nv, p ** (n - i)), p**i))
        return out

    def _build(self, target) -> list[dict]:
        p, nv = self.p, self.nvars
        polys: list[dict] = []
        for n in range(self.r):
            acc = target(n)
            for i, q in enumerate(polys):
                acc = _padd(acc, _pscale(_ppow(q, p ** (n - i), nv), p**i), -1)
            polys.append(_pdiv_exact(acc, p**n))
        return polys

    def ghost_of(self, polys: list[dict], n: int) -> dict:
        """``Phi_n`` applied symbolically to a list of polynomials."""
        p = self.p
        out: dict = {}
        for i in range(n + 1):
            out = _padd(out, _pscale(_ppow(polys[i], p ** (n - i), self.nvars), p**i))
        return out

    def verify_ghost_identities(self) -> bool:
        """Recompute every ghost identity symbolically."""
        for n in range(self.r):
            gx, gy = self.ghost_x(n), self.ghost_y(n)
            if self.ghost_of(self.S, n) != _padd(gx, gy):
                return False
            if self.ghost_of(self.D, n) != _padd(gx, gy, -1):
                return False
            if self.ghost_of(self.P, n) != _pmul(gx, gy):
                return False
        return True

    def trie(self, kind: str, n: int, modulus: int):
        key = (kind, n, modulus)
        t = self._tries.get(key)
        if t is None:
            poly = getattr(self, kind)[n]
            if modulus:
                poly = {e: c % modulus for e, c in poly.items() if c % modulus}
            t = _build_trie(sorted(poly.items()), 0, self.nvars)
            self._tries[key] = t
        return t

    def format(self, kind: str, n: int) -> str:
        r = self.r
        names = [f"x{i}" for i in range(r)] + [f"y{i}" for i in range(r)]
        terms = []
        for e, c in sorted(getattr(self, kind)[n].items(), key=lambda t: (sum(t[0]), t[0])):
            mon = "*".join(nm if k == 1 else f"{nm}^{k}" for nm, k in zip(names, e) if k)
            if not mon:
                terms.append(str(c))
            elif c == 1:
                terms.append(mon)
            elif c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{c}*{mon}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


_lock = threading.Lock()


@lru_cache(maxsize=None)
def _cached_polys(p: int, r: int) -> UniversalWittPolys:
    return UniversalWittPolys(p, r)


def build_universal_polys(p: int, r: int) -> UniversalWittPolys:
    """Universal Witt polynomials for ``(p, r)``, built once and shared."""
    with _lock:
        return _cached_polys(p, r)


def _build_trie(items, k: int, nvars: int):
    # items: sorted list of (exps, coef); returns int or dict e -> subtrie
    if k == nvars:
        return sum(c for _, c in items)
    groups: dict[int, list] = {}
    for e, c in items:
        groups.setdefault(e[k], []).append((e, c))
    if len(groups) == 1 and 0 in groups:
        return _build_trie(items, k + 1, nvars) if k + 1 <= nvars else 0
    return (k, {e: _build_trie(sub, k + 1, nvars) for e, sub in groups.items()})


def _eval_trie(node, vals, cache):
    if isinstance(node, int):
        return node
    k, children = node
    total = 0
    for e, child in children.items():
        sub = _eval_trie(child, vals, cache)
        if isinstance(sub, int) and sub == 0:
            continue
        if e == 0:
            term = sub
        else:
            key = (k, e)
            pw = cache.get(key)
            if pw is None:
                pw = vals[k] ** e
                cache[key] = pw
            term = pw * sub if not isinstance(sub, int) or sub != 1 else pw
        total = term if isinstance(total, int) and total == 0 else total + term
    return total


def characteristic_of(x) -> int:
    if isinstance(x, (int, Fraction)):
        return 0
    return x.characteristic


class WittVector:
    """A Witt vector ``(w_0, ..., w_{r-1})`` at the prime ``p``."""

    __slots__ = ("p", "comps")

    def __init__(self, comps, p: int):
        comps = tuple(comps)
        if not comps:
            raise DomainError("Witt vectors have length >= 1")
        self.p = p
        self.comps = comps
        ch = characteristic_of(comps[0])
        if ch not in (0, p):
            raise DomainError(f"coefficient ring of characteristic {ch} for p = {p}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def teichmuller(cls, x, r: int, p: int) -> WittVector:
        z = x * 0
        return cls((x,) + (z,) * (r - 1), p)

    @classmethod
    def zero_like(cls, x, r: int, p: int) -> WittVector:
        z = x * 0
        return cls((z,) * r, p)

    # -- basic ------------------------------------------------------------

    @property
    def r(self) -> int:
        return len(self.comps)

    @property
    def characteristic(self) -> int:
        return characteristic_of(self.comps[0])

    def __len__(self):
        return len(self.comps)

    def __getitem__(self, i):
        return self.comps[i]

    def __iter__(self):
        return iter(self.comps)

    def f(self, i: int):
        """Component in the ``(f_{r-1}, ..., f_0)`` indexing."""
        return self.comps[self.r - 1 - i]

    def _zero(self):
        return self.comps[0] * 0

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.comps)

    def _check(self, other: WittVector):
        if not isinstance(other, WittVector):
            raise DomainError("expected a Witt vector")
        if other.p != self.p or other.r != self.r:
            raise DomainError(f"Witt parameter mismatch: (p={self.p}, r={self.r}) vs (p={other.p}, r={other.r})")

    def _apply(self, kind: str, other: WittVector | None) -> WittVector:
        U = build_universal_polys(self.p, self.r)
        mod = self.p if self.characteristic else 0
        vals = list(self.comps) + (list(other.comps) if other is not None else [self._zero()] * self.r)
        cache: dict = {}
        out = []
        z = self._zero()
        for n in range(self.r):
            v = _eval_trie(U.trie(kind, n, mod), vals, cache)
            if isinstance(v, int):
                v = z + v if v else z
            out.append(v)
        return WittVector(out, self.p)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        self._check(other)
        return self._apply("S", other)

    def __sub__(self, other):
        self._check(other)
        return self._apply("D", other)

    def __neg__(self):
        # N is D(0, y): feed self into the y slots
        U = build_universal_polys(self.p, self.r)
        mod = self.p if self.characteristic else 0
        z = self._zero()
        vals = [z] * self.r + list(self.comps)
        cache: dict = {}
        out = []
        for n in range(self.r):
            v = _eval_trie(U.trie("N", n, mod), vals, cache)
            if isinstance(v, int):
                v = z + v if v else z
            out.append(v)
        return WittVector(out, self.p)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        return self._apply("P", other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, n: int) -> WittVector:
        """Integer multiple ``n * self`` by double-and-add."""
        if n < 0:
            return (-self).scale(-n)
        out = WittVector.zero_like(self.comps[0], self.r, self.p)
        base = self
        first = True
        while n:
            if n & 1:
                out = base if first else out + base
                first = False
            n >>= 1
            if n:
                base = base + base
        return out

    # -- Frobenius, Verschiebung, ghost ------------------------------------

    def frobenius(self, times: int = 1) -> WittVector:
        """Frobenius ``F``.

        Over characteristic p this is componentwise ``x -> x**p``.  Over a
        characteristic-0 ring the ghost route is used, which maps length
        ``r`` to length ``r - 1``.
        """
        w = self
        for _ in range(times):
            w = w._frobenius_once()
        return w

    def _frobenius_once(self) -> WittVector:
        p = self.p
        if self.characteristic == p:
            return WittVector([c**p for c in self.comps], p)
        if self.r < 2:
            raise DomainError("ghost-route Frobenius needs length >= 2")
        gh = self.ghost()[1:]
        return WittVector.from_ghost(gh, p)

    def verschiebung(self, length: int | None = None) -> WittVector:
        """``V(w_0, ..., w_{r-1}) = (0, w_0, ..., w_{r-1})``, truncated to ``length``."""
        comps = (self._zero(),) + self.comps
        if length is not None:
            comps = comps[:length]
        return WittVector(comps, self.p)

    def truncate(self, length: int) -> WittVector:
        return WittVector(self.comps[:length], self.p)

    def ghost(self) -> list:
        """Ghost components ``Phi_j = sum_{i<=j} p^i w_i^(p^(j-i))`` (characteristic 0)."""
        if self.characteristic != 0:
            raise DomainError("ghost components need a characteristic-0 coefficient ring")
        p = self.p
        return [sum(p**i * self.comps[i] ** (p ** (j - i)) for i in range(j + 1)) for j in range(self.r)]

    @classmethod
    def from_ghost(cls, ghost, p: int) -> WittVector:
        """Inverse of :meth:`ghost` over the rationals; fails if not integral."""
        comps: list = []
        for j, g in enumerate(ghost):
            rest = g - sum(p**i * comps[i] ** (p ** (j - i)) for i in range(j))
            c = Fraction(rest) / p**j
            comps.append(int(c) if c.denominator == 1 else c)
        return cls(comps, p)

    def map(self, fn) -> WittVector:
        """Apply a ring homomorphism to every component."""
        return WittVector([fn(c) for c in self.comps], self.p)

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.p == other.p and self.r == other.r and all(_eq(a, b) for a, b in zip(self.comps, other.comps))

    def __hash__(self):
        return hash((self.p, self.comps))

    def __repr__(self):
        return "(" + "; ".join(_fmt(c) for c in self.comps) + ")"


def _is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def _eq(a, b) -> bool:
    if isinstance(a, (int, Fraction)) or isinstance(b, (int, Fraction)):
        return a == b
    return _is_zero(a - b)


def _fmt(c) -> str:
    if hasattr(c, "format"):
        return c.format()
    return str(c)


def teichmuller(x, r: int, p: int) -> WittVector:
    return WittVector.teichmuller(x, r, p)


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    return a + b


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    return a * b


def witt_neg(a: WittVector) -> WittVector:
    return -a


def frobenius(w: WittVector) -> WittVector:
    return w.frobenius()


def verschiebung(w: WittVector) -> WittVector:
    return w.verschiebung()


def ghost(w: WittVector) -> list:
    return w.ghost()
