"""Subgroups of filtered finite abelian p-groups by level-wise echelon.

The ambient group ``G`` carries a descending filtration ``G = G_0 > G_1 > ...``
whose graded pieces are F_p-vector spaces.  Group elements are opaque; an
:class:`Ops` object supplies the group law, and ``lead(x)`` returns the
filtration level of ``x`` together with the F_p-coordinates of its image in
that graded piece (``None`` for the identity).  Additivity of ``lead`` on
each graded piece is the only structural assumption.

A subgroup is stored as a list of pivots, at most one per (level, key); with
closure under ``x -> p*x`` every subgroup element is a unique product
``prod pivot_i^{e_i}`` with ``0 <= e_i < p``, so sifting decides membership
and ``|H| = p^(number of pivots)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


class Ops:
    """Group interface used by :class:`PGroupEchelon` (additive notation)."""

    p: int

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def scale(self, a, n: int):
        """``n * a`` for ``n >= 0``."""
        out = None
        base = a
        while n:
            if n & 1:
                out = base if out is None else self.add(out, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return out if out is not None else self.add(a, self.neg(a))

    def lead(self, a):
        """``(level, {key: coordinate mod p})`` or ``None`` for the identity."""
        raise NotImplementedError


@dataclass
class Pivot:
    level: int
    key: object
    vec: dict
    elem: object
    witness: dict = field(default_factory=dict)


def _combine(w1: dict, w2: dict, c: int) -> dict:
    out = dict(w1)
    for k, v in w2.items():
        n = out.get(k, 0) + c * v
        if n:
            out[k] = n
        else:
            out.pop(k, None)
    return out


class PGroupEchelon:
    """Echelon basis of the subgroup generated by the inserted elements."""

    def __init__(self, ops: Ops, max_steps: int = 200000):
        self.ops = ops
        self.p = ops.p
        self.levels: dict[int, dict] = {}
        self.max_steps = max_steps
        self.generators: dict = {}

    @property
    def pivots(self) -> list[Pivot]:
        out = []
        for lvl in sorted(self.levels):
            out.extend(self.levels[lvl][k] for k in sorted(self.levels[lvl], key=_key_order))
        return out

    def log_order(self) -> int:
        """``log_p`` of the subgroup order."""
        return sum(len(v) for v in self.levels.values())

    def order(self) -> int:
        return self.p ** self.log_order()

    def _reduce_level(self, elem, lvl, vec, witness):
        """Eliminate ``vec`` against the pivots of level ``lvl``.

        Returns the adjusted element, the leftover vector and witness.
        """
        p = self.p
        piv = self.levels.get(lvl, {})
        vec = dict(vec)
        combo = []
        for key in sorted(piv, key=_key_order):
            c = vec.get(key, 0) % p
            if not c:
                continue
            pv = piv[key]
            coef = c * pow(pv.vec[key], -1, p) % p
            for k2, v2 in pv.vec.items():
                nv = (vec.get(k2, 0) - coef * v2) % p
                if nv:
                    vec[k2] = nv
                else:
                    vec.pop(k2, None)
            combo.append((pv, coef))
        if combo:
            ops = self.ops
            for pv, coef in combo:
                elem = ops.add(elem, ops.neg(ops.scale(pv.elem, coef)))
                witness = _combine(witness, pv.witness, -coef)
        return elem, vec, witness

    def sift(self, elem, witness=None):
        """Reduce ``elem`` as far as the pivots allow.

        Returns ``(remainder, witness)``; the remainder is the identity iff
        ``elem`` lies in the subgroup, in which case ``elem`` equals the
        witness combination of generators.
        """
        witness = dict(witness or {})
        ops = self.ops
        steps = 0
        while True:
            ld = ops.lead(elem)
            if ld is None:
                return elem, witness
            lvl, vec = ld
            elem, left, witness = self._reduce_level(elem, lvl, vec, witness)
            if left:
                return elem, witness
            steps += 1
            if steps > self.max_steps:
                raise RuntimeError("sift did not terminate")

    def insert(self, elem, label=None) -> bool:
        """Add a generator; returns True if the subgroup grew."""
        witness = {label: 1} if label is not None else {}
        if label is not None:
            self.generators[label] = elem
        grew = False
        queue = deque([(elem, witness)])
        steps = 0
        while queue:
            g, w = queue.popleft()
            rem, w = self.sift(g, w)
            ld = self.ops.lead(rem)
            if ld is None:
                continue
            lvl, vec = ld
            # the leftover is already reduced against this level
            key = min(vec, key=_key_order)
            self.levels.setdefault(lvl, {})[key] = Pivot(lvl, key, dict(vec), rem, w)
            grew = True
            queue.append((self.ops.scale(rem, self.p), {k: v * self.p for k, v in w.items()}))
            steps += 1
            if steps > self.max_steps:
                raise RuntimeError("closure did not terminate")
        return grew

    def contains(self, elem) -> tuple[bool, dict]:
        rem, w = self.sift(elem)
        if self.ops.lead(rem) is None:
            # elem - sum w_i g_i is trivial, i.e. elem = sum w_i g_i
            return True, {k: -v for k, v in w.items() if v}
        return False, {}


def _key_order(k):
    return k
