"""Filtrations of the local Witt group ``W_r(K)`` for ``K = k((s))``.

Filtration coordinates ``(f_{r-1}, ..., f_0)`` relate to stored Witt
components by ``f_i = w[r-1-i]``.  The bounds are

* ``fil_n``:   ``val(f_i) >= -floor(n / p^i)`` for all ``i``;
* ``flat fil_n``: additionally, if ``nu = ord_p(n) < r``, ``p^nu val(f_nu) > -n``;
* ``fil^F_n = sum_nu F^nu fil_n`` (and likewise for the flat variant).

Membership in ``fil^F_n`` is decided in the finite p-group
``fil_M W_r(K) / W_r(O)`` by a level-wise echelon over Teichmuller monomial
generators (see :mod:`albmod.echelon`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .echelon import Ops, PGroupEchelon
from .errors import CapError, DomainError, PrecisionError
from .fields import FiniteField
from .laurent import LaurentSeries, LocalDifferential
from .places import Place, expand_at_place
from .ratfun import RatFun
from .witt import WittVector


def p_adic_order(n: int, p: int) -> int | None:
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# -- local Witt vectors ------------------------------------------------------


def localize(w: WittVector, place: Place, abs_prec: int) -> WittVector:
    """Expand every component of a Witt vector over ``F_q(t)`` at ``place``.

    Components are known to absolute precision ``abs_prec`` in the standard
    uniformizer.
    """
    E = place.residue_field
    comps = []
    for f in w.comps:
        if not isinstance(f, RatFun):
            raise DomainError("global Witt vectors must have RatFun components")
        if not f:
            comps.append(LaurentSeries.zero(E, abs_prec))
            continue
        v = place.valuation(f)
        if v >= abs_prec:
            comps.append(LaurentSeries.zero(E, abs_prec))
            continue
        comps.append(expand_at_place(f, place, abs_prec - v))
    return WittVector(comps, w.p)


def _val_at_least(x: LaurentSeries, bound: int) -> bool:
    if x.c:
        return x.start >= bound
    if x.prec is None or x.prec >= bound:
        return True
    raise PrecisionError("valuation bound not certified by the precision")


def fil_bound(n: int, p: int, i: int) -> int:
    """``floor(n / p^i)``: the pole bound for the filtration coordinate ``f_i``."""
    return n // p**i


def in_fil(u: WittVector, n: int) -> bool:
    """``u in fil_n W_r(K)``."""
    if n < 0:
        raise DomainError("n must be >= 0")
    r, p = u.r, u.p
    return all(_val_at_least(u.comps[r - 1 - i], -fil_bound(n, p, i)) for i in range(r))


def in_flat_fil(u: WittVector, n: int) -> bool:
    """``u in flat-fil_n W_r(K)``; ``u`` must lie in ``fil_n``."""
    if not in_fil(u, n):
        raise DomainError("element is not in fil_n")
    r, p = u.r, u.p
    nu = p_adic_order(n, p)
    if nu is None or nu >= r:
        return True
    f = u.comps[r - 1 - nu]
    # p^nu val(f_nu) > -n  <=>  val(f_nu) >= 1 - n / p^nu
    return _val_at_least(f, 1 - n // p**nu)


def delta(u: WittVector) -> LocalDifferential:
    """``sum_i f_i^(p^i - 1) df_i`` as a differential ``g ds``."""
    r, p = u.r, u.p
    E = u.comps[0].field
    g = LaurentSeries.zero(E)
    for i in range(r):
        f = u.comps[r - 1 - i]
        if f.is_zero() and f.prec is None:
            continue
        g = g + f ** (p**i - 1) * f.derivative()
    return LocalDifferential(g)


def graded_delta_class(u: WittVector, n: int) -> int:
    """Class of ``delta(u)`` in ``Omega(log) (x) m^-n / m^(1-n)``.

    With ``delta(u) = g ds = (g s) dlog s`` this is the coefficient of
    ``s^(-n-1)`` in ``g``.
    """
    return delta(u).g.coefficient(-n - 1)


# -- principal-part classes ----------------------------------------------------


def _teich_at(j: int, x: LaurentSeries, r: int, p: int) -> WittVector:
    z = LaurentSeries.zero(x.field)
    return WittVector([x if i == j else z for i in range(r)], p)


def _tail_kill(u: WittVector) -> tuple[LaurentSeries, ...]:
    r = u.r
    for j in range(r):
        I = u.comps[j].integral_part()
        if I.c:
            u = u - _teich_at(j, I, r, u.p)
    return tuple(c.principal_part() for c in u.comps)


@dataclass(frozen=True)
class PrincipalPartClass:
    """Canonical representative of a class in ``W_r(K)/W_r(O)``.

    Every component is a polynomial in ``s^-1`` without constant term; the
    representative is obtained by subtracting ``V^j[integral part]`` level
    by level, so it is unique.
    """

    p: int
    comps: tuple

    @classmethod
    def of(cls, u: WittVector) -> PrincipalPartClass:
        return cls(u.p, _tail_kill(u))

    @property
    def r(self) -> int:
        return len(self.comps)

    @property
    def field(self) -> FiniteField:
        return self.comps[0].field

    def witt(self) -> WittVector:
        return WittVector(self.comps, self.p)

    def is_zero(self) -> bool:
        return not any(c.c for c in self.comps)

    def pole_orders(self) -> tuple[int, ...]:
        return tuple(c.pole_order() for c in self.comps)

    def max_pole(self) -> int:
        return max(self.pole_orders(), default=0)

    def __add__(self, other):
        return PrincipalPartClass.of(self.witt() + other.witt())

    def __sub__(self, other):
        return PrincipalPartClass.of(self.witt() - other.witt())

    def __neg__(self):
        return PrincipalPartClass.of(-self.witt())

    def scale(self, n: int) -> PrincipalPartClass:
        return _CLASS_OPS_CACHE(self.p).scale(self, n) if n >= 0 else (-self).scale(-n)

    def frobenius(self) -> PrincipalPartClass:
        return PrincipalPartClass(self.p, tuple(c.frobenius() for c in self.comps))

    def __eq__(self, other):
        return isinstance(other, PrincipalPartClass) and self.p == other.p and self.comps == other.comps

    def __hash__(self):
        return hash((self.p, self.comps))

    def __repr__(self):
        return "(" + "; ".join(c.format() for c in self.comps) + ")"


def canonical_class(u) -> PrincipalPartClass:
    if isinstance(u, PrincipalPartClass):
        return u
    return PrincipalPartClass.of(u)


class WittClassOps(Ops):
    """Group law on principal-part classes; levels are Witt component indices."""

    def __init__(self, p: int):
        self.p = p

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def scale(self, a, n):
        if n == 0:
            return PrincipalPartClass(a.p, tuple(LaurentSeries.zero(c.field) for c in a.comps))
        return Ops.scale(self, a, n)

    def lead(self, a):
        p = self.p
        for j, c in enumerate(a.comps):
            if c.c:
                E = c.field
                vec = {}
                for e, x in c.terms():
                    for i, d in enumerate(E.digits(x)):
                        if d:
                            vec[(e, i)] = d % p
                return j, vec
        return None


@lru_cache(maxsize=None)
def _CLASS_OPS_CACHE(p: int) -> WittClassOps:
    return WittClassOps(p)


# -- generators and membership ---------------------------------------------------


@dataclass(frozen=True)
class Caps:
    M: int
    nu_max: int

    def enlarged(self, p: int) -> Caps:
        return Caps(self.M * p, self.nu_max + 1)


def default_caps(pole_bound: int, n: int, p: int, r: int) -> Caps:
    return Caps(max(pole_bound, n * p ** (r + 1), 1), r + 2)


def level_pole_bound(n: int, p: int, r: int, j: int, flat: bool = False) -> int:
    """Largest allowed pole at stored level ``j`` for ``fil_n`` (or flat ``fil_n``)."""
    i = r - 1 - j
    b = n // p**i
    if flat:
        nu = p_adic_order(n, p)
        if nu is not None and nu < r and nu == i:
            b = n // p**nu - 1
    return max(b, 0)


def fil_generators(E: FiniteField, p: int, r: int, n: int, caps: Caps, flat: bool = False):
    """Labelled generators ``F^nu V^j [c s^-m]`` of ``fil^F_n`` mod ``W_r(O)``.

    ``c`` runs over the F_p-basis of ``E``; ``m`` over ``1..`` the level bound;
    ``nu <= caps.nu_max`` and total pole ``m p^nu <= caps.M``.
    """
    out = []
    for j in range(r):
        bound = level_pole_bound(n, p, r, j, flat)
        for m in range(1, bound + 1):
            for nu in range(caps.nu_max + 1):
                e = m * p**nu
                if e > caps.M:
                    break
                for b, c in enumerate(E.prime_basis()):
                    cc = E.frobenius(c, nu)
                    x = LaurentSeries.monomial(E, -e, cc)
                    out.append(((j, m, nu, b), PrincipalPartClass(p, _teich_at(j, x, r, p).comps)))
    return out


def generator_label(label) -> str:
    j, m, nu, b = label
    s = f"[c{b}*s^-{m}]"
    if j:
        s = ("V" if j == 1 else f"V^{j}") + s
    if nu:
        s = ("F" if nu == 1 else f"F^{nu}") + s
    return s


@lru_cache(maxsize=512)
def filtration_echelon(E: FiniteField, p: int, r: int, n: int, caps: Caps, flat: bool = False) -> PGroupEchelon:
    ech = PGroupEchelon(_CLASS_OPS_CACHE(p))
    for label, g in fil_generators(E, p, r, n, caps, flat):
        ech.insert(g, label)
    return ech


@dataclass
class MembershipCertificate:
    verdict: str  # "IN" or "NOT-IN-UP-TO-CAP"
    n: int
    caps: Caps
    witness: list = field(default_factory=list)
    stable: bool | None = None

    @property
    def is_in(self) -> bool:
        return self.verdict == "IN"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "n": self.n,
            "caps": {"M": self.caps.M, "nu_max": self.caps.nu_max},
            "witness": [[generator_label(lbl), c] for lbl, c in self.witness],
            "cap_stable": self.stable,
        }


def _combination(ech: PGroupEchelon, witness: dict, p: int, r: int, E) -> PrincipalPartClass:
    ops = ech.ops
    acc = ops.scale(next(iter(ech.generators.values())), 0) if ech.generators else None
    for lbl, c in witness.items():
        g = ech.generators[lbl]
        term = ops.scale(g, c) if c >= 0 else ops.neg(ops.scale(g, -c))
        acc = term if acc is None else ops.add(acc, term)
    return acc


def filF_membership(u, n: int, caps: Caps | None = None, flat: bool = False, check_stability: bool = True) -> MembershipCertificate:
    """Decide ``u in fil^F_n W_r(K)`` (or the flat variant) up to caps."""
    if n < 0:
        raise DomainError("n must be >= 0")
    cls = canonical_class(u)
    p, r, E = cls.p, cls.r, cls.field
    pole = cls.max_pole()
    if caps is None:
        caps = default_caps(pole, n, p, r)
    if caps.M < pole:
        raise DomainError(f"pole cap {caps.M} cannot represent an element with pole {pole}")
    if cls.is_zero():
        return MembershipCertificate("IN", n, caps, [], True)
    ech = filtration_echelon(E, p, r, n, caps, flat)
    ok, witness = ech.contains(cls)
    if ok:
        total = _combination(ech, witness, p, r, E)
        if total != cls:
            raise AssertionError("membership witness failed to re-verify")
        wl = sorted((lbl, c % (p**r)) for lbl, c in witness.items() if c % (p**r))
        return MembershipCertificate("IN", n, caps, wl, True)
    cert = MembershipCertificate("NOT-IN-UP-TO-CAP", n, caps)
    if check_stability:
        big = caps.enlarged(p)
        ok2, _ = filtration_echelon(E, p, r, n, big, flat).contains(cls)
        cert.stable = not ok2
        if ok2:
            raise CapError(f"membership verdict changed when caps grew from {caps} to {big}")
    return cert


def nty_upper_bound(u) -> int:
    """``max_i p^i * (-val f_i)^+``; this level always certifies membership."""
    cls = canonical_class(u)
    r, p = cls.r, cls.p
    return max((p ** (r - 1 - j) * c.pole_order() for j, c in enumerate(cls.comps)), default=0)


def nty(u, caps_for=None) -> int:
    """``min{n : u in fil^F_n}``; 0 iff ``u`` is integral."""
    cls = canonical_class(u)
    if cls.is_zero():
        return 0
    hi = nty_upper_bound(cls)
    cert = filF_membership(cls, hi, caps_for(hi) if caps_for else None)
    if not cert.is_in:
        raise AssertionError("the upper bound failed to certify membership")
    lo = 0  # u is not in fil^F_0 = W_r(O)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if filF_membership(cls, mid, caps_for(mid) if caps_for else None).is_in:
            hi = mid
        else:
            lo = mid
    return hi


def nty_with_certificate(u) -> tuple[int, MembershipCertificate]:
    n = nty(u)
    return n, filF_membership(u, n)


def as_reduce(f: LaurentSeries, p: int | None = None) -> tuple[int, list]:
    """Artin-Schreier style reduction of a single series (``r = 1``).

    Leading terms ``c s^-(p m)`` are rewritten as ``F(c^(1/p) s^-m)`` until
    the exponent is prime to p; the largest exponent so reached is the least
    ``n`` with ``f in sum_nu F^nu fil_n W_1``.  Returns ``(n, chain)`` where
    the chain records every rewriting step.
    """
    E = f.field
    p = p or E.p
    if f.prec is not None and f.prec < 0:
        raise PrecisionError("principal part not certified")
    part = {e: a for e, a in f.terms() if e < 0}
    n = 0
    chain = []
    while part:
        e = min(part)
        a = part.pop(e)
        m, root, nu = -e, a, 0
        while m % p == 0:
            m //= p
            root = E.pth_root(root)
            nu += 1
        chain.append({"pole": -e, "root_pole": m, "frobenius_steps": nu, "coefficient": E.format(root)})
        n = max(n, m)
    return n, chain
