"""The modulus of a rational map ``P^1 --> T x U`` and the infinitesimal test.

A map is given by coordinates: toric coordinates ``t_j`` in ``F_q(t)*`` and
unipotent coordinates ``u_i`` in ``W_r(F_q(t))``.  Its modulus is

    mod_q = 0                          if every coordinate is a regular unit at q,
    mod_q = 1 + max_i nty_q(u_i)       otherwise (max over nothing is 0).

The equivalent infinitesimal condition pairs nilpotent Witt vectors ``v`` over
Artin rings ``R = k[eps]/(eps^N)`` with the ``u_i`` through the Artin-Hasse
exponential and asks whether the resulting unit classes lie in the formal
group generated by ``Exp_AH(v * w)`` for ``w`` in ``fil^F_{n_q - 1}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .artin import ArtinRing, EpsElem
from .artin_hasse import eval_E
from .curve import Divisor, principal_divisor, support_places
from .echelon import Ops, PGroupEchelon
from .errors import CapError, DomainError, PrecisionError
from .fields import FiniteField
from .filtration import Caps, PrincipalPartClass, fil_generators, localize, nty
from .laurent import LaurentSeries
from .places import Place
from .poly import factor
from .ratfun import RatFun
from .witt import WittVector


@dataclass
class RationalMapData:
    """Coordinates of ``phi``: toric ``t_j`` and unipotent ``u_i`` (common length ``r``)."""

    field: FiniteField
    toric: list = field(default_factory=list)
    unip: list = field(default_factory=list)
    r: int = 1

    def __post_init__(self):
        if not self.toric and not self.unip:
            raise DomainError("a rational map needs at least one coordinate")
        for f in self.toric:
            if not isinstance(f, RatFun) or not f:
                raise DomainError("toric coordinates must be nonzero rational functions")
            if f.field is not self.field:
                raise DomainError("coordinate over a different field")
        for w in self.unip:
            if not isinstance(w, WittVector):
                raise DomainError("unipotent coordinates must be Witt vectors")
            if w.r != self.r or w.p != self.field.p:
                raise DomainError(f"unipotent coordinates must lie in W_{self.r} over characteristic {self.field.p}")
            if any(c.field is not self.field for c in w.comps):
                raise DomainError("coordinate over a different field")

    @property
    def p(self) -> int:
        return self.field.p


def _pole_places(f: RatFun) -> set:
    out = set()
    if not f:
        return out
    if f.den.degree > 0:
        for g, _ in factor(f.den):
            out.add(Place(f.field, g, check=False))
    if f.num.degree > f.den.degree:
        out.add(Place.infinity(f.field))
    return out


def unip_pole_places(phi: RationalMapData) -> list[Place]:
    out = set()
    for w in phi.unip:
        for c in w.comps:
            out |= _pole_places(c)
    return sorted(out)


def tau_et_support(phi: RationalMapData) -> set:
    """Union of the supports of ``div(t_j)``."""
    out = set()
    for f in phi.toric:
        out |= set(support_places(f))
    return out


def _needed_precision(w: WittVector, q: Place) -> int:
    pole = max((max(0, -q.valuation(c)) for c in w.comps if c), default=0)
    return pole * w.p ** w.r + 2


def local_class(w: WittVector, q: Place) -> PrincipalPartClass:
    """Canonical class of ``w`` in ``W_r(K_q)/W_r(O_q)``, precision chosen automatically."""
    prec = _needed_precision(w, q)
    for _ in range(8):
        try:
            return PrincipalPartClass.of(localize(w, q, prec))
        except PrecisionError:
            prec *= 2
    raise PrecisionError(f"could not certify the principal part of {w} at {q}")


def nty_at(w: WittVector, q: Place) -> int:
    return nty(local_class(w, q))


def modulus_of(phi: RationalMapData) -> tuple[Divisor, dict]:
    """``(mod(phi), per-place nty lists)``."""
    places = tau_et_support(phi) | set(unip_pole_places(phi))
    coeffs = {}
    per_place = {}
    for q in sorted(places):
        ntys = [nty_at(w, q) for w in phi.unip]
        per_place[q] = ntys
        coeffs[q] = 1 + max(ntys, default=0)
    return Divisor(phi.field, coeffs), per_place


def modulus_char0(toric, unip) -> dict:
    """Characteristic-0 branch: ``nty = -val`` at poles, via sympy over Q.

    ``toric`` and ``unip`` are sympy expressions in the symbol ``t``.  Returns
    a mapping from place strings (irreducible factors, or ``"inf"``) to
    multiplicities.
    """
    import sympy

    t = sympy.Symbol("t")

    def valuations(expr):
        num, den = sympy.fraction(sympy.together(sympy.sympify(expr)))
        out = {}
        for part, sign in ((num, 1), (den, -1)):
            _, facs = sympy.factor_list(sympy.Poly(part, t))
            for g, e in facs:
                if g.degree() > 0:
                    key = str(g.monic().as_expr())
                    out[key] = out.get(key, 0) + sign * e
        deg = sympy.Poly(den, t).degree() - sympy.Poly(num, t).degree()
        if deg:
            out["inf"] = deg
        return out

    result = {}
    for f in toric:
        for key, v in valuations(f).items():
            if v:
                result[key] = max(result.get(key, 0), 1)
    for u in unip:
        for key, v in valuations(u).items():
            if v < 0:
                result[key] = max(result.get(key, 0), 1 - v)
    return dict(sorted(result.items()))


# -- unit classes over Artin rings ----------------------------------------------


@dataclass(frozen=True)
class UnitClass:
    """Class in ``(K_q (x) R)* / (O_q (x) R)*`` for ``R = k[eps]/(eps^N)``.

    ``parts[k-1]`` is the principal part at ``eps^k``: the class of
    ``prod_k (1 + eps^k P_k)``.
    """

    place: Place
    N: int
    parts: tuple

    def is_trivial(self) -> bool:
        return not any(P.c for P in self.parts)

    def element(self) -> EpsElem:
        E = self.place.residue_field
        one = LaurentSeries.one(E)
        acc = EpsElem.scalar(one, self.N)
        for k, P in enumerate(self.parts, start=1):
            if P.c:
                acc = acc * (EpsElem.scalar(one, self.N) + EpsElem.eps(one, self.N, k) * P)
        return acc

    def to_json(self) -> dict:
        return {f"eps^{k}": P.format() for k, P in enumerate(self.parts, start=1) if P.c}

    def __repr__(self):
        terms = [f"(1+({P.format()})*eps^{k})" for k, P in enumerate(self.parts, start=1) if P.c]
        return "*".join(terms) or "1"


def unit_class(c: EpsElem, place: Place) -> UnitClass:
    """Canonical class of a unit ``c == 1 mod eps`` with exact Laurent coefficients."""
    N = c.N
    E = place.residue_field
    one = LaurentSeries.one(E)
    first = c.c[0]
    if first != one:
        raise DomainError("unit classes are normalised to constant term 1")
    parts = []
    for k in range(1, N):
        a = c.c[k]
        P = a.principal_part() if a.c else LaurentSeries.zero(E)
        parts.append(P)
        if a.c:
            c = c * (EpsElem.scalar(one, N) + EpsElem.eps(one, N, k) * a).inverse()
    return UnitClass(place, N, tuple(parts))


class UnitClassOps(Ops):
    def __init__(self, p: int):
        self.p = p

    def add(self, a, b):
        return unit_class(a.element() * b.element(), a.place)

    def neg(self, a):
        return unit_class(a.element().inverse(), a.place)

    def scale(self, a, n):
        if n == 0:
            return UnitClass(a.place, a.N, tuple(LaurentSeries.zero(P.field) for P in a.parts))
        return unit_class(a.element() ** n, a.place)

    def lead(self, a):
        p = self.p
        for k, P in enumerate(a.parts, start=1):
            if P.c:
                E = P.field
                vec = {}
                for e, x in P.terms():
                    for i, d in enumerate(E.digits(x)):
                        if d:
                            vec[(e, i)] = d % p
                return k, vec
        return None


def _embed_ring_elem(x: EpsElem, E: FiniteField) -> EpsElem:
    """``R = F_q[eps]/eps^N`` into ``K_q (x) R`` (coefficients as constant series)."""
    return EpsElem([LaurentSeries(E, 0, (a.v,)) for a in x.c], x.N)


def _series_times(x: EpsElem, a: LaurentSeries) -> EpsElem:
    return EpsElem([b * a for b in x.c], x.N)


def ah_teich_pair(x: EpsElem, j: int, u: PrincipalPartClass, place: Place) -> EpsElem:
    """``Exp_AH(V^j[x] * u) = prod_i E(x^(p^i) * u_i^(p^j))`` for ``x^(p^r) = 0``.

    Uses ``V^j[x] * u = V^j([x] * F^j u)``, ``Exp_AH o V = Exp_AH`` and
    ``[x] * w = (x^(p^i) w_i)_i``; the condition on ``x`` makes the result
    independent of the lift of ``u`` to infinite length.
    """
    p, r = u.p, u.r
    if not (x ** (p**r)).is_zero():
        raise DomainError("v must be killed by F^r")
    E = place.residue_field
    xe = _embed_ring_elem(x, E)
    acc = None
    for i, ui in enumerate(u.comps):
        if not ui.c:
            continue
        y = _series_times(xe ** (p**i), ui.frobenius(j) if j else ui)
        if y.is_zero():
            continue
        term = eval_E(y, p)
        acc = term if acc is None else acc * term
    if acc is None:
        return EpsElem.scalar(LaurentSeries.one(E), x.N)
    return acc


def spanning_nilpotents(ring: ArtinRing, p: int, r: int) -> list[EpsElem]:
    """Nonzero nilpotents ``x`` of ``ring`` with ``x^(p^r) = 0``."""
    return [x for x in ring.nilpotents_killed_by(p**r) if not x.is_zero()]


def tau_inf_class(phi: RationalMapData, v, q: Place, ring: ArtinRing | None = None) -> UnitClass:
    """Class of ``prod_i Exp_AH(v_i * u_i)`` at ``q``.

    ``v`` is a list (one entry per unipotent coordinate) of nilpotent Witt
    vectors over ``ring``; entry ``(x_0, x_1, ...)`` is read as
    ``sum_j V^j [x_j]``.
    """
    if len(v) != len(phi.unip):
        raise DomainError("need one nilpotent Witt vector per unipotent coordinate")
    E = q.residue_field
    N = None
    acc = None
    for vi, ui in zip(v, phi.unip):
        cls = local_class(ui, q)
        for j, x in enumerate(vi.comps):
            N = x.N
            if x.is_zero():
                continue
            term = ah_teich_pair(x, j, cls, q)
            acc = term if acc is None else acc * term
    if N is None:
        N = ring.N if ring is not None else 2
    if acc is None:
        acc = EpsElem.scalar(LaurentSeries.one(E), N)
    return unit_class(acc, q)


# -- the formal group F(X, D) at a place -------------------------------------------


@lru_cache(maxsize=256)
def formal_group_echelon(E: FiniteField, p: int, r: int, n: int, ring: ArtinRing, caps: Caps) -> PGroupEchelon:
    """Echelon of the unit classes ``E(x^(p^l) a)`` with ``V^l[a]`` generating ``fil^F_n``."""
    ops = UnitClassOps(p)
    ech = PGroupEchelon(ops)
    if n <= 0:
        return ech
    q = _model_place(E)
    xs = spanning_nilpotents(ring, p, r)
    gens = fil_generators(E, p, r, n, caps)
    for x in xs:
        xe = _embed_ring_elem(x, E)
        for label, g in gens:
            l = label[0]
            a = g.comps[l]
            y = _series_times(xe ** (p**l), a)
            if y.is_zero():
                continue
            ech.insert(unit_class(eval_E(y, p), q), (tuple(b.v for b in x.c), label))
    return ech


@lru_cache(maxsize=None)
def _model_place(E: FiniteField) -> Place:
    # unit classes only use the residue field; any place with that field will do
    return _ModelPlace(E)


class _ModelPlace(Place):
    __slots__ = ()

    def __init__(self, E):
        self.field = E
        self.poly = None
        self._key = (2, 0, ())

    @property
    def residue_field(self):
        return self.field


def _rebase(c: UnitClass, E: FiniteField) -> UnitClass:
    return UnitClass(_model_place(E), c.N, c.parts)


def fxd_inf_member(c: UnitClass, D: Divisor, r: int, ring: ArtinRing, p: int | None = None, caps: Caps | None = None) -> bool:
    """Is ``c`` in the local infinitesimal part of ``F(X, D)`` at its place?

    The local generators are ``Exp_AH(v * w)`` with ``w`` in
    ``fil^F_{n_q - 1} W_r(K_q)``; membership is decided level by level in
    the eps-adic filtration.
    """
    if ring.N != c.N:
        raise DomainError("ring does not match the unit class")
    if c.is_trivial():
        return True
    q = c.place
    n = D[q]
    if n <= 1:
        return False
    E = q.residue_field
    p = p or E.p
    pole = max((P.pole_order() for P in c.parts), default=0)
    if caps is None:
        caps = Caps(max(pole, (n - 1) * p ** (r + 1)), r + 2)
    ech = formal_group_echelon(E, p, r, n - 1, ring, caps)
    ok, _ = ech.contains(_rebase(c, E))
    if not ok:
        big = caps.enlarged(p)
        ok2, _ = formal_group_echelon(E, p, r, n - 1, ring, big).contains(_rebase(c, E))
        if ok2:
            raise CapError(f"infinitesimal membership changed when caps grew from {caps} to {big}")
    return ok


# -- the equivalence report ------------------------------------------------------


DEFAULT_RINGS = (2, 3, 4)


def default_rings(field: FiniteField) -> list[ArtinRing]:
    return [ArtinRing(field, N) for N in DEFAULT_RINGS]


def condition_ii(phi: RationalMapData, D: Divisor, rings) -> tuple[bool, dict]:
    """Etale support condition and infinitesimal membership for a spanning set of ``v``."""
    et_support = tau_et_support(phi)
    supp = set(D.support)
    et_ok = et_support <= supp
    detail = {"etale_ok": et_ok, "etale_support": sorted(repr(q) for q in et_support), "failures": []}
    if not et_ok:
        return False, detail
    p, r = phi.p, phi.r
    for q in unip_pole_places(phi):
        for ring in rings:
            xs = spanning_nilpotents(ring, p, r)
            for idx in range(len(phi.unip)):
                for j in range(2):
                    for x in xs:
                        v = []
                        for k in range(len(phi.unip)):
                            z = ring.zero()
                            comps = [z] * (j + 1)
                            if k == idx:
                                comps[j] = x
                            v.append(WittVector(comps, p))
                        c = tau_inf_class(phi, v, q, ring)
                        if not fxd_inf_member(c, D, r, ring, p):
                            detail["failures"].append(
                                {"place": repr(q), "ring_N": ring.N, "coordinate": idx, "V_power": j, "x": x.format(), "class": c.to_json()}
                            )
                            return False, detail
    return True, detail


def lemma_equivalence_report(phi: RationalMapData, D: Divisor, rings=None) -> dict:
    """Compare (i) ``mod(phi) <= D`` with (ii) the etale + infinitesimal conditions."""
    if not D.is_effective():
        raise DomainError("D must be effective")
    rings = list(rings) if rings is not None else default_rings(phi.field)
    mod, per_place = modulus_of(phi)
    cond_i = mod <= D
    cond_ii, detail = condition_ii(phi, D, rings)
    report = {
        "D": D.format(),
        "modulus": mod.format(),
        "nty": {repr(q): v for q, v in per_place.items()},
        "i": cond_i,
        "ii": cond_ii,
        "agree": cond_i == cond_ii,
        "rings": [ring.N for ring in rings],
        "detail": detail,
    }
    if not report["agree"]:
        report["counterexample"] = {
            "kind": "lemma",
            "p": phi.p,
            "m": phi.field.degree,
            "r": phi.r,
            "toric": [f.format() for f in phi.toric],
            "unip": ["(" + ";".join(c.format() for c in w.comps) + ")" for w in phi.unip],
            "D": D.format(),
        }
    return report


def principal_divisor_of_toric(phi: RationalMapData) -> list[Divisor]:
    return [principal_divisor(f) for f in phi.toric]
