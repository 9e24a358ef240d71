"""Exact rational linear algebra: small dense helpers and a sparse reduced basis."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping


def _frac_rows(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a dense matrix, pivots chosen by position."""
    m = _frac_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows @ x = 0} over Q."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(v)
    return basis


class Underdetermined(ValueError):
    pass


def solve_unique(rows, rhs) -> list[Fraction] | None:
    """Unique solution of rows @ x = rhs, None if inconsistent.

    Raises Underdetermined when the solution is not unique.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    if len(pivots) < ncols:
        raise Underdetermined(f"rank {len(pivots)} < {ncols} unknowns")
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def integer_multiple(v: Iterable[Fraction]) -> list[int]:
    """Smallest positive integer rescaling of a rational vector."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    return [x // g for x in ints] if g else ints


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class SubspaceBasis:
    """Fully reduced row echelon basis of a subspace of Q^(columns).

    Columns are arbitrary hashable keys; ``order`` maps a column to a sort key
    and fixes pivot choice (the leading column of a row is its pivot). With a
    fixed order the reduced form is canonical.
    """

    __slots__ = ("order", "rows", "_where")

    def __init__(self, order: Callable[[Hashable], object] | None = None):
        self.order = order or (lambda c: c)
        self.rows: dict[Hashable, dict[Hashable, Fraction]] = {}
        # column -> pivots of rows having a nonzero entry there
        self._where: dict[Hashable, set] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list:
        return sorted(self.rows, key=self.order)

    def matrix(self) -> list[tuple[Hashable, dict]]:
        return [(p, self.rows[p]) for p in self.pivots()]

    def reduce(self, vec: Mapping) -> dict:
        out = {k: Fraction(v) for k, v in vec.items() if v}
        hits = [k for k in out if k in self.rows]
        for p in hits:
            c = out.pop(p)
            for k, v in self.rows[p].items():
                if k == p:
                    continue
                nv = out.get(k, 0) - c * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping) -> bool:
        """Insert a vector; return True when the rank grows."""
        res = self.reduce(vec)
        if not res:
            return False
        self._insert(res)
        return True

    def _insert(self, res: dict):
        p = min(res, key=self.order)
        lead = res[p]
        row = {k: v / lead for k, v in res.items()}
        for q in list(self._where.get(p, ())):
            other = self.rows[q]
            c = other[p]
            for k, v in row.items():
                nv = other.get(k, 0) - c * v
                if nv:
                    if k not in other:
                        self._where.setdefault(k, set()).add(q)
                    other[k] = nv
                elif k in other:
                    del other[k]
                    self._where[k].discard(q)
        self._where.pop(p, None)
        self.rows[p] = row
        for k in row:
            if k != p:
                self._where.setdefault(k, set()).add(p)

    def coordinate_vanishes(self, col) -> bool:
        """True when every vector of the span has zero coordinate at ``col``."""
        return col not in self.rows and not self._where.get(col)

    def restrict(self, keep: Callable[[Hashable], bool]) -> "SubspaceBasis":
        """Intersection with the coordinate subspace of columns where keep(col)."""
        elim = SubspaceBasis(order=lambda c, o=self.order: (bool(keep(c)), o(c)))
        for _, row in self.matrix():
            elim.add(row)
        out = SubspaceBasis(order=self.order)
        for p, row in elim.rows.items():
            if keep(p):
                out.add(row)
        return out

    def copy(self) -> "SubspaceBasis":
        new = SubspaceBasis(order=self.order)
        new.rows = {p: dict(r) for p, r in self.rows.items()}
        new._where = {k: set(v) for k, v in self._where.items()}
        return new

    def canonical(self) -> list:
        """Hashable canonical form: sorted (pivot, sorted row items)."""
        return [
            (p, sorted(((k, v) for k, v in r.items()), key=lambda kv: self.order(kv[0])))
            for p, r in self.matrix()
        ]
