"""Smith normal form over the integers and finite abelian groups."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M):
    """Return ``(diag, U, V)`` with ``U*M*V`` diagonal.

    ``diag`` lists the invariant factors ``d_1 | d_2 | ...`` (length
    ``min(rows, cols)``, zeros last).  ``U`` and ``V`` are unimodular.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def row_combine(k, i):
        a, b = A[k][k], A[i][k]
        if b % a == 0:
            q = b // a
            A[i] = [y - q * x for x, y in zip(A[k], A[i])]
            U[i] = [y - q * x for x, y in zip(U[k], U[i])]
            return
        g, s, t = _xgcd(a, b)
        a, b = a // g, b // g
        rk, ri, uk, ui = A[k], A[i], U[k], U[i]
        A[k] = [s * x + t * y for x, y in zip(rk, ri)]
        A[i] = [-b * x + a * y for x, y in zip(rk, ri)]
        U[k] = [s * x + t * y for x, y in zip(uk, ui)]
        U[i] = [-b * x + a * y for x, y in zip(uk, ui)]

    def col_combine(k, j):
        a, b = A[k][k], A[k][j]
        if b % a == 0:
            q = b // a
            for row in A:
                row[j] -= q * row[k]
            for row in V:
                row[j] -= q * row[k]
            return
        g, s, t = _xgcd(a, b)
        a, b = a // g, b // g
        for mat in (A, V):
            for row in mat:
                x, y = row[k], row[j]
                row[k], row[j] = s * x + t * y, -b * x + a * y

    for k in range(min(m, n)):
        piv = None
        for i in range(k, m):
            for j in range(k, n):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(k, piv[0])
        swap_cols(k, piv[1])
        while True:
            for i in range(k + 1, m):
                if A[i][k]:
                    row_combine(k, i)
            for j in range(k + 1, n):
                if A[k][j]:
                    col_combine(k, j)
            if any(A[i][k] for i in range(k + 1, m)):
                continue
            d = A[k][k]
            bad = next((i for i in range(k + 1, m) if any(A[i][j] % d for j in range(k + 1, n))), None)
            if bad is None:
                break
            # pulling the offending row in forces a strictly smaller pivot
            A[k] = [x + y for x, y in zip(A[k], A[bad])]
            U[k] = [x + y for x, y in zip(U[k], U[bad])]
        if A[k][k] < 0:
            A[k] = [-x for x in A[k]]
            U[k] = [-x for x in U[k]]
    diag = [A[i][i] for i in range(min(m, n))]
    return diag, U, V


def mat_mul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def lattice_basis(rows, ncols: int):
    """Echelon basis (Hermite-style, over Z) of the row lattice of ``rows``.

    Rows are inserted one at a time; entries above pivots are reduced so the
    basis stays small even for thousands of relation rows.
    """
    basis: dict[int, list[int]] = {}
    for row in rows:
        v = list(row)
        for c in range(ncols):
            if not v[c]:
                continue
            if c not in basis:
                if v[c] < 0:
                    v = [-x for x in v]
                basis[c] = v
                _reduce_above(basis, c, ncols)
                v = None
                break
            b = basis[c]
            if v[c] % b[c] == 0:
                q = v[c] // b[c]
                v = [x - q * y for x, y in zip(v, b)]
                continue
            g, s, t = _xgcd(b[c], v[c])
            a1, b1 = b[c] // g, v[c] // g
            new_b = [s * x + t * y for x, y in zip(b, v)]
            v = [-b1 * x + a1 * y for x, y in zip(b, v)]
            if new_b[c] < 0:
                new_b = [-x for x in new_b]
            basis[c] = new_b
            _reduce_above(basis, c, ncols)
        if v is not None and any(v):
            raise AssertionError("row reduction left a nonzero remainder")
    return [basis[c] for c in sorted(basis)]


def _reduce_above(basis, c, ncols):
    piv = basis[c]
    for c2, row in basis.items():
        if c2 < c and row[c]:
            q = row[c] // piv[c]
            if q:
                basis[c2] = [x - q * y for x, y in zip(row, piv)]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Invariant-factor presentation ``Z/d_1 x Z/d_2 x ...`` with ``d_i | d_{i+1}``."""

    invariant_factors: tuple[int, ...]
    generators: tuple = field(default=(), compare=False)

    def __post_init__(self):
        inv = tuple(d for d in self.invariant_factors if d != 1)
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ValueError(f"invariant factors {inv} do not form a divisibility chain")
        if any(d <= 0 for d in inv):
            raise ValueError("a finite group has positive invariant factors")
        object.__setattr__(self, "invariant_factors", inv)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def p_rank(self, p: int) -> int:
        return sum(1 for d in self.invariant_factors if d % p == 0)

    @classmethod
    def from_cyclic_orders(cls, orders) -> FiniteAbelianGroup:
        orders = [o for o in orders if o != 1]
        if not orders:
            return cls(())
        diag, _, _ = smith_normal_form([[orders[i] if i == j else 0 for j in range(len(orders))] for i in range(len(orders))])
        return cls(tuple(d for d in diag if d != 1))

    @classmethod
    def from_relations(cls, rows, ngens: int) -> tuple[FiniteAbelianGroup, int]:
        """Quotient of ``Z^ngens`` by the row lattice; returns (torsion, free rank)."""
        basis = lattice_basis(rows, ngens) if rows else []
        if not basis:
            return cls(()), ngens
        diag, _, _ = smith_normal_form(basis)
        rank = sum(1 for d in diag if d)
        free = ngens - rank
        return cls(tuple(d for d in diag if d > 1)), free

    def product(self, other: FiniteAbelianGroup) -> FiniteAbelianGroup:
        return FiniteAbelianGroup.from_cyclic_orders(self.invariant_factors + other.invariant_factors)

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def p_group_from_counts(p: int, counts) -> FiniteAbelianGroup:
    """Structure of an abelian p-group from ``counts[k] = |G[p^k]|``, ``k = 0..``.

    ``log_p(|G[p^k]| / |G[p^(k-1)]|)`` is the number of cyclic factors of
    order at least ``p^k``.
    """
    logs = []
    for c in counts:
        e = 0
        while c > 1:
            if c % p:
                raise ValueError("counts are not powers of p")
            c //= p
            e += 1
        logs.append(e)
    at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
    orders = []
    for k, n in enumerate(at_least, start=1):
        nxt = at_least[k] if k < len(at_least) else 0
        orders += [p**k] * (n - nxt)
    return FiniteAbelianGroup.from_cyclic_orders(orders)


__all__ = [
    "FiniteAbelianGroup",
    "lattice_basis",
    "mat_mul",
    "p_group_from_counts",
    "smith_normal_form",
    "gcd",
]
