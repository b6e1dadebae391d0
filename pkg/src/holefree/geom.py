"""Exact geometric predicates over integer and rational points.

Everything here works on Python ints and :class:`fractions.Fraction`; there
are no tolerances. Interior and hull-membership questions are decided by an
exact phase-one simplex, so the predicates hold in any dimension without
building a convex hull.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

Number = int | Fraction
RationalPoint = tuple[Fraction, ...]

__all__ = [
    "RationalPoint",
    "GeneralPositionResult",
    "as_point",
    "det",
    "orientation",
    "affine_rank",
    "general_position",
    "in_hull",
    "strict_interior",
    "convex_position",
]


def as_point(p: Sequence[Number | str]) -> RationalPoint:
    """Coerce a coordinate sequence to a tuple of reduced fractions."""
    return tuple(Fraction(c) for c in p)


def det(matrix: Sequence[Sequence[Number]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        pv = a[col][col]
        result *= pv
        for r in range(col + 1, n):
            f = a[r][col] / pv
            if f:
                row_r, row_c = a[r], a[col]
                for k in range(col + 1, n):
                    row_r[k] -= f * row_c[k]
    return sign * result


def orientation(points: Sequence[Sequence[Number]]) -> int:
    """Sign of the affine determinant of ``d + 1`` points in ``R^d``."""
    p0 = points[0]
    d = len(p0)
    if len(points) != d + 1:
        raise ValueError(f"orientation needs {d + 1} points in R^{d}, got {len(points)}")
    rows = [[Fraction(p[k]) - Fraction(p0[k]) for k in range(d)] for p in points[1:]]
    v = det(rows)
    return (v > 0) - (v < 0)


def _rank(rows: list[list[Fraction]]) -> int:
    a = [list(r) for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        pv = a[rank][col]
        for r in range(len(a)):
            if r != rank and a[r][col] != 0:
                f = a[r][col] / pv
                for k in range(col, ncols):
                    a[r][k] -= f * a[rank][k]
        rank += 1
        if rank == len(a):
            break
    return rank


def affine_rank(S: Sequence[Sequence[Number]]) -> int:
    """Dimension of the affine hull of a nonempty point list."""
    if not S:
        raise ValueError("affine_rank of an empty set is undefined")
    p0 = as_point(S[0])
    rows = [[Fraction(c) - c0 for c, c0 in zip(p, p0)] for p in S[1:]]
    return _rank(rows)


@dataclass(frozen=True)
class GeneralPositionResult:
    ok: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def general_position(A: Sequence[Sequence[Number]], d: int | None = None) -> GeneralPositionResult:
    """Check that every subset of at most ``d + 1`` points is affinely independent.

    This is the strong notion: a ``k``-flat with ``k < d`` may hold at most
    ``k + 1`` points. On failure the smallest offending index subset is
    returned (smallest size first, then lexicographic).
    """
    pts = [as_point(p) for p in A]
    if d is None:
        d = len(pts[0]) if pts else 0
    n = len(pts)
    seen: dict[RationalPoint, int] = {}
    for i, p in enumerate(pts):
        if p in seen:
            return GeneralPositionResult(False, (seen[p], i))
        seen[p] = i
    for size in range(3, min(d + 1, n) + 1):
        for idx in combinations(range(n), size):
            if affine_rank([pts[i] for i in idx]) < size - 1:
                return GeneralPositionResult(False, idx)
    return GeneralPositionResult(True)


def _nonneg_feasible(A: list[list[Fraction]], b: list[Fraction]) -> bool:
    """Decide whether ``A x = b`` has a solution with ``x >= 0``.

    Phase-one simplex on a fraction tableau with Bland's rule, so it
    terminates and is exact.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    width = cols + rows
    tab: list[list[Fraction]] = []
    for i in range(rows):
        sgn = -1 if b[i] < 0 else 1
        row = [sgn * a for a in A[i]]
        row += [Fraction(1 if k == i else 0) for k in range(rows)]
        row.append(sgn * b[i])
        tab.append(row)
    basis = [cols + i for i in range(rows)]

    while True:
        in_basis = set(basis)
        art_rows = [i for i in range(rows) if basis[i] >= cols]
        enter = None
        for j in range(width):
            if j in in_basis:
                continue
            reduced = (1 if j >= cols else 0) - sum(tab[i][j] for i in art_rows)
            if reduced < 0:
                enter = j
                break
        if enter is None:
            break
        leave = None
        best = None
        for i in range(rows):
            coef = tab[i][enter]
            if coef > 0:
                ratio = tab[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            break
        pv = tab[leave][enter]
        prow = [x / pv for x in tab[leave]]
        tab[leave] = prow
        for i in range(rows):
            if i != leave:
                f = tab[i][enter]
                if f:
                    tab[i] = [x - f * y for x, y in zip(tab[i], prow)]
        basis[leave] = enter
    return all(tab[i][-1] == 0 for i in range(rows) if basis[i] >= cols)


def in_hull(p: Sequence[Number], S: Sequence[Sequence[Number]]) -> bool:
    """Closed convex hull membership: ``p`` is a convex combination of ``S``."""
    if not S:
        return False
    pp = as_point(p)
    d = len(pp)
    pts = [as_point(s) for s in S]
    A = [[s[k] for s in pts] for k in range(d)] + [[Fraction(1)] * len(pts)]
    b = list(pp) + [Fraction(1)]
    return _nonneg_feasible(A, b)


def strict_interior(p: Sequence[Number], S: Sequence[Sequence[Number]]) -> bool:
    """True iff ``p`` lies in the interior of ``conv(S)`` taken in ``R^d``.

    A lower-dimensional hull has no interior, so the answer is then False.
    Otherwise ``p`` is interior exactly when some strictly positive weights
    give ``sum(w_s * (s - p)) = 0``; substituting ``w = 1 + u`` with ``u >= 0``
    turns that into a nonnegative feasibility problem. (No separating direction
    ``c != 0`` with ``<c, s - p> >= 0`` exists exactly in this case.)
    """
    if not S:
        return False
    pp = as_point(p)
    d = len(pp)
    pts = [as_point(s) for s in S]
    if len(pts) < d + 1 or affine_rank(pts) < d:
        return False
    diffs = [[s[k] - pp[k] for k in range(d)] for s in pts]
    A = [[v[k] for v in diffs] for k in range(d)]
    b = [-sum(v[k] for v in diffs) for k in range(d)]
    return _nonneg_feasible(A, b)


def convex_position(S: Sequence[Sequence[Number]]) -> bool:
    """Every point of ``S`` is a vertex of ``conv(S)``; a repeated point is not."""
    pts = [as_point(s) for s in S]
    if not pts:
        raise ValueError("convex_position needs at least one point")
    for i, s in enumerate(pts):
        rest = pts[:i] + pts[i + 1:]
        if rest and in_hull(s, rest):
            return False
    return True
