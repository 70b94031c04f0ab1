"""Exact sparse linear algebra over Fractions.

Vectors are dicts ``column -> Fraction`` with no stored zeros.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Vector = Dict[int, Fraction]


def _axpy(target: Vector, factor, source: Vector) -> None:
    """target -= factor * source, in place."""
    for k, v in source.items():
        nv = target.get(k, 0) - factor * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class EchelonBasis:
    """Incremental row echelon form; each row's pivot is its largest column.

    Reducing a vector against the basis leaves a remainder supported on
    non-pivot columns only, so with columns numbered in a fixed order the
    remainder is a canonical normal form modulo the span.
    """

    def __init__(self):
        self.rows: Dict[int, Vector] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def reduce(self, vec: Vector) -> Vector:
        vec = {k: v for k, v in vec.items() if v}
        rows = self.rows
        while True:
            hits = [c for c in vec if c in rows]
            if not hits:
                return vec
            col = max(hits)
            _axpy(vec, vec[col], rows[col])

    def add(self, vec: Vector) -> bool:
        """Insert ``vec``; return False when it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        col = max(r)
        inv = 1 / Fraction(r[col])
        self.rows[col] = {k: v * inv for k, v in r.items()}
        return True

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)


def rref(rows: Iterable[Vector]) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form with pivot = smallest column of each row."""
    pivot_rows: Dict[int, Vector] = {}
    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v}
        # stored rows are fully reduced, so one pass clears every pivot column
        for col in [c for c in r if c in pivot_rows]:
            _axpy(r, r[col], pivot_rows[col])
        if not r:
            continue
        col = min(r)
        inv = 1 / r[col]
        r = {k: v * inv for k, v in r.items()}
        for other in pivot_rows.values():
            if col in other:
                _axpy(other, other[col], r)
        pivot_rows[col] = r
    order = sorted(pivot_rows)
    return [pivot_rows[c] for c in order], order


def rank(rows: Iterable[Vector]) -> int:
    basis = EchelonBasis()
    return sum(1 for r in rows if basis.add(r))


def nullspace(rows: Iterable[Vector], ncols: int) -> List[Vector]:
    """Basis of ``{x : row . x = 0 for all rows}``; one vector per free column."""
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec: Vector = {free: Fraction(1)}
        for row, p in zip(reduced, pivots):
            c = row.get(free)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


def solve_affine(rows: Sequence[Vector], rhs: Sequence, ncols: int
                 ) -> Optional[Tuple[Vector, List[Vector]]]:
    """Solve ``rows . x = rhs`` exactly.

    Returns ``(particular, nullspace_basis)`` or None when inconsistent.  The
    particular solution sets every free variable to zero.
    """
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if b:
            r[ncols] = Fraction(b)
        aug.append(r)
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    particular = {p: row[ncols] for row, p in zip(reduced, pivots) if row.get(ncols)}
    kernel = nullspace([{k: v for k, v in row.items() if k != ncols} for row in reduced], ncols)
    return particular, kernel


def dense(vec: Vector, n: int) -> List[Fraction]:
    return [vec.get(i, Fraction(0)) for i in range(n)]
