"""The series E(t) and the Artin-Hasse exponential on Witt vectors.

``E(t) = exp(-sum_{r>=0} t^(p^r)/p^r) = prod_{(n,p)=1} (1 - t^n)^(mu(n)/n)``.
Both expressions are expanded over the rationals, every coefficient is
checked to be p-integral, and only then reduced mod p.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .fields import is_prime
from .witt import WittVector, characteristic_of

MAX_TRUNCATION = 256


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError("mobius is defined for n >= 1")
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def _check_args(p: int, N: int):
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if not 0 <= N <= MAX_TRUNCATION:
        raise DomainError(f"truncation must lie in 0..{MAX_TRUNCATION}")


@lru_cache(maxsize=None)
def exp_form_rational(p: int, N: int) -> tuple[Fraction, ...]:
    """Coefficients of ``exp(-sum t^(p^r)/p^r)`` through degree ``N``."""
    _check_args(p, N)
    g = [Fraction(0)] * (N + 1)
    e = 1
    while e <= N:
        g[e] = Fraction(-1, e)
        e *= p
    # E' = g' E  =>  n E_n = sum_k k g_k E_{n-k}
    E = [Fraction(1)] + [Fraction(0)] * N
    for n in range(1, N + 1):
        s = Fraction(0)
        k = 1
        while k <= n:
            s += k * g[k] * E[n - k]
            k *= p
        E[n] = s / n
    return tuple(E)


def _binomial_series(a: Fraction, n: int, N: int) -> list[Fraction]:
    """Coefficients of ``(1 - t^n)^a`` through degree ``N``."""
    out = [Fraction(0)] * (N + 1)
    c = Fraction(1)
    k = 0
    while k * n <= N:
        out[k * n] = c if k % 2 == 0 else -c
        c = c * (a - k) / (k + 1)
        k += 1
    return out


def _mul_trunc(a, b, N):
    out = [Fraction(0)] * (N + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(N + 1 - i):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


@lru_cache(maxsize=None)
def product_form_rational(p: int, N: int) -> tuple[Fraction, ...]:
    """Coefficients of ``prod_{(n,p)=1} (1 - t^n)^(mu(n)/n)`` through degree ``N``."""
    _check_args(p, N)
    acc = [Fraction(1)] + [Fraction(0)] * N
    for n in range(1, N + 1):
        if n % p == 0:
            continue
        mu = mobius(n)
        if mu == 0:
            continue
        acc = _mul_trunc(acc, _binomial_series(Fraction(mu, n), n, N), N)
    return tuple(acc)


def is_p_integral(x: Fraction, p: int) -> bool:
    return x.denominator % p != 0


def _reduce(x: Fraction, p: int) -> int:
    return x.numerator * pow(x.denominator, -1, p) % p


@dataclass(frozen=True)
class AHSeries:
    """``E(t)`` reduced mod p through degree ``N``."""

    p: int
    N: int
    coeffs: tuple[int, ...]
    integrality_checked: bool = True

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)


@lru_cache(maxsize=None)
def eah_coefficients(p: int, N: int) -> AHSeries:
    """Coefficients of ``E(t)`` mod p through ``t^N``.

    Raises ``ArithmeticError`` if a rational coefficient fails to be
    p-integral or if the two defining formulas disagree, both of which
    would indicate an arithmetic bug.
    """
    exp_form = exp_form_rational(p, N)
    prod_form = product_form_rational(p, N)
    if exp_form != prod_form:
        k = next(i for i, (a, b) in enumerate(zip(exp_form, prod_form)) if a != b)
        raise ArithmeticError(f"exp and product forms of E differ at degree {k}")
    bad = [k for k, c in enumerate(exp_form) if not is_p_integral(c, p)]
    if bad:
        raise ArithmeticError(f"E(t) coefficient of degree {bad[0]} is not {p}-integral")
    return AHSeries(p, N, tuple(_reduce(c, p) for c in exp_form))


# -- evaluation ------------------------------------------------------------


def nilpotency_bound(x) -> int:
    """Smallest ``k`` with ``x**k == 0`` known structurally, or raise.

    Supported: elements of truncated rings exposing ``nil_index()``; Laurent
    series of positive valuation with finite absolute precision.
    """
    if hasattr(x, "nil_index"):
        k = x.nil_index()
        if k is None:
            raise DomainError("argument of E is not nilpotent")
        return k
    if hasattr(x, "val_lower"):
        v = x.val_lower()
        if v <= 0:
            raise DomainError("argument of E must have positive valuation")
        if x.prec is None:
            if x.is_zero():
                return 1
            raise DomainError("exact series of positive valuation: truncate first")
        return -(-x.prec // v)
    raise DomainError(f"cannot evaluate E at {type(x).__name__}")


def eval_E(x, p: int):
    """``E(x)`` for a nilpotent (or topologically nilpotent, truncated) ``x``."""
    k = nilpotency_bound(x)
    coeffs = eah_coefficients(p, max(k - 1, 0)).coeffs
    one = x * 0 + 1
    acc = one
    pw = one
    for c in coeffs[1:]:
        pw = pw * x
        if c:
            acc = acc + pw * c
    return acc


def carry_length(p: int, r: int, N: int) -> int:
    """Length that holds every carry of sums and products of length-``r`` vectors.

    Components of index ``k`` of a sum or product of vectors whose entries lie
    in ``(eps)`` of ``k[eps]/(eps^N)`` are products of at least ``p^(k-r+1)``
    entries, so they vanish once ``p^(k-r+1) >= N``.  Truncated Witt
    arithmetic drops the carries beyond the length, hence ``Exp_AH`` is
    multiplicative on length-``r`` inputs only after zero-padding to this
    length.
    """
    L = r
    while p ** (L - r + 1) < N:
        L += 1
    return L


def pad(w: WittVector, length: int) -> WittVector:
    """Extend ``w`` by zero components."""
    z = w.comps[0] * 0
    return WittVector(w.comps + (z,) * (length - w.r), w.p)


def exp_ah(w: WittVector):
    """``Exp_AH(w) = prod_i E(w_i)``.

    Multiplicative on vectors long enough to carry all sums, see
    :func:`carry_length`.
    """
    if characteristic_of(w.comps[0]) != w.p:
        raise DomainError("Exp_AH needs a characteristic-p coefficient ring")
    acc = None
    for c in w.comps:
        term = eval_E(c, w.p)
        acc = term if acc is None else acc * term
    return acc


def ah_pair(v: WittVector, u: WittVector, embed=None):
    """``Exp_AH(v * u)`` after extending ``v`` and ``u`` to a common ring.

    ``embed`` is a pair of callables moving components of ``v`` and of ``u``
    into the common coefficient ring (defaults: identity).
    """
    if v.p != u.p or v.r != u.r:
        raise DomainError("Witt parameter mismatch in ah_pair")
    if embed is not None:
        ev, eu = embed
        v = v.map(ev)
        u = u.map(eu)
    return exp_ah(v * u)
