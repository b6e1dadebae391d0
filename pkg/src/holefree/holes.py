"""Holes: exact detection, counting and the hole-free oracle.

Point sets are lists of integer or rational coordinate tuples. Before any
search they are scaled by the common denominator to integers, which keeps
every orientation test an exact integer computation.

Planar searches go through :mod:`holefree.kernels`. In higher dimension the
hull of a subset is described by its supporting hyperplanes through ``d``
affinely independent members, which is exact and cheap for the small subsets
involved.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm
from typing import Sequence

from holefree import geom, kernels

__all__ = [
    "HoleCaps",
    "HoleReport",
    "HoleFreeResult",
    "to_integer_points",
    "is_hole",
    "is_hole_free",
    "max_hole",
    "count_holes",
]

Point = Sequence[int | Fraction]


@dataclass(frozen=True)
class HoleCaps:
    max_predicate_calls: int = 10**8
    max_subsets: int = 10**7

    @classmethod
    def from_env(cls) -> "HoleCaps":
        """Defaults overridable by ``HOLEFREE_MAX_PREDICATE_CALLS`` / ``HOLEFREE_MAX_SUBSETS``."""
        calls = int(os.environ.get("HOLEFREE_MAX_PREDICATE_CALLS", cls.max_predicate_calls))
        subsets = int(os.environ.get("HOLEFREE_MAX_SUBSETS", cls.max_subsets))
        if calls <= 0 or subsets <= 0:
            raise ValueError("caps must be positive")
        return cls(calls, subsets)


@dataclass(frozen=True)
class HoleReport:
    hole_size: int
    witness_subset: tuple[int, ...]
    verified_empty: bool
    search_caps_hit: bool = False
    algo: str = ""
    predicate_calls: int = 0


@dataclass(frozen=True)
class HoleFreeResult:
    status: str  # "pass" | "violation" | "cap_exceeded"
    ell: int
    witness: tuple[int, ...] | None = None
    predicate_calls: int = 0
    vacuous: bool = False
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def __bool__(self) -> bool:
        return self.ok


def to_integer_points(A: Sequence[Point]) -> list[tuple[int, ...]]:
    """Scale all points by the common denominator; hole structure is unchanged."""
    pts = [tuple(Fraction(c) for c in p) for p in A]
    den = 1
    for p in pts:
        for c in p:
            den = lcm(den, c.denominator)
    return [tuple(int(c * den) for c in p) for p in pts]


def _dim(pts: Sequence[Sequence]) -> int:
    if not pts:
        raise ValueError("empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("points of mixed dimension")
    return d


# -- exact integer hyperplane machinery for d >= 3 ---------------------------

def _idet(M: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    a = [list(r) for r in M]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if sw is None:
                return 0
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _normal(P: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Integer normal of the hyperplane through ``d`` points in ``R^d`` (zero if degenerate)."""
    d = len(P[0])
    rows = [[P[k][j] - P[0][j] for j in range(d)] for k in range(1, d)]
    out = []
    for j in range(d):
        minor = [[r[c] for c in range(d) if c != j] for r in rows]
        v = _idet(minor)
        out.append(-v if j % 2 else v)
    g = 0
    for v in out:
        g = gcd(g, v)
    return tuple(v // g for v in out) if g else tuple(out)


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _facets(pts: Sequence[Sequence[int]], S: Sequence[int]) -> list[tuple[tuple[int, ...], int]] | None:
    """Supporting hyperplanes ``<n, x> >= c`` of ``conv(pts[S])``, or None if it is flat."""
    d = len(pts[0])
    P = [pts[i] for i in S]
    if len(P) < d + 1 or geom.affine_rank(P) < d:
        return None
    planes: set[tuple[tuple[int, ...], int]] = set()
    for T in combinations(P, d):
        nrm = _normal(T)
        if not any(nrm):
            continue
        off = _dot(nrm, T[0])
        vals = [_dot(nrm, p) - off for p in P]
        if all(v >= 0 for v in vals):
            planes.add((nrm, off))
        elif all(v <= 0 for v in vals):
            planes.add((tuple(-x for x in nrm), -off))
    return sorted(planes)


def _strictly_inside(facets, q) -> bool:
    return all(_dot(n, q) > c for n, c in facets)


def _in_hull(pts, S, q) -> bool:
    facets = _facets(pts, S)
    if facets is None:
        return geom.in_hull(q, [pts[i] for i in S])
    return all(_dot(n, q) >= c for n, c in facets)


def _convex_nd(pts, S) -> bool:
    if len(set(pts[i] for i in S)) < len(S):
        return False
    for s in S:
        rest = [i for i in S if i != s]
        if rest and _in_hull(pts, rest, pts[s]):
            return False
    return True


def _empty_nd(pts, S) -> bool:
    facets = _facets(pts, S)
    if facets is None:
        return False
    inS = set(S)
    return not any(_strictly_inside(facets, pts[q]) for q in range(len(pts)) if q not in inS)


# -- public operations --------------------------------------------------------

def is_hole(A: Sequence[Point], S: Sequence[int]) -> bool:
    """``A[S]`` is in convex position with no other point of ``A`` strictly inside.

    Reference implementation on the exact predicates of :mod:`holefree.geom`.
    Subsets with fewer than ``d + 1`` points bound no full-dimensional polytope
    and are never holes.
    """
    d = _dim(A)
    S = list(S)
    if len(set(S)) != len(S) or len(S) < d + 1:
        return False
    P = [A[i] for i in S]
    if not geom.convex_position(P):
        return False
    inS = set(S)
    return not any(geom.strict_interior(A[v], P) for v in range(len(A)) if v not in inS)


def is_hole_free(A: Sequence[Point], ell: int, caps: HoleCaps | None = None) -> HoleFreeResult:
    """Every ``ell``-subset has a point of ``A`` strictly inside its hull.

    All ``ell``-subsets are checked, not just those in convex position, and
    the interior point may itself belong to the subset. With fewer than
    ``ell`` points the condition holds vacuously.
    """
    caps = caps or HoleCaps.from_env()
    if ell < 1:
        raise ValueError("ell must be positive")
    pts = to_integer_points(A)
    n = len(pts)
    if n < ell:
        return HoleFreeResult("pass", ell, vacuous=True, detail=f"{n} points < ell")
    if comb(n, ell) > caps.max_subsets:
        return HoleFreeResult("cap_exceeded", ell, detail=f"C({n}, {ell}) exceeds {caps.max_subsets} subsets")
    d = _dim(pts)
    if d == 2:
        status, witness, calls = kernels.holefree_scan_2d(pts, ell, caps.max_predicate_calls)
    elif d == 1:
        status, witness, calls = _holefree_scan_1d(pts, ell)
    else:
        status, witness, calls = _holefree_scan_nd(pts, ell, caps.max_predicate_calls)
    name = {0: "pass", 1: "violation", 3: "cap_exceeded"}[status]
    return HoleFreeResult(name, ell, tuple(witness) if status == 1 else None, calls)


def _holefree_scan_1d(pts, ell):
    calls = 0
    for S in combinations(range(len(pts)), ell):
        lo = min(pts[i][0] for i in S)
        hi = max(pts[i][0] for i in S)
        calls += 1
        if not any(lo < p[0] < hi for p in pts):
            return 1, S, calls
    return 0, None, calls


def _holefree_scan_nd(pts, ell, max_calls):
    n = len(pts)
    calls = 0
    for S in combinations(range(n), ell):
        facets = _facets(pts, S)
        covered = False
        if facets is not None:
            inS = set(S)
            order = list(S) + [i for i in range(n) if i not in inS]
            for v in order:
                calls += 1
                if _strictly_inside(facets, pts[v]):
                    covered = True
                    break
        else:
            calls += 1
        if not covered:
            return 1, S, calls
        if calls > max_calls:
            return 3, S, calls
    return 0, None, calls


def _check_general_position(pts, d):
    if d == 2:
        n = len(pts)
        if len(set(pts)) < n:
            raise ValueError("points are not distinct")
        for a, b, c in combinations(range(n), 3):
            if _cross(pts[a], pts[b], pts[c]) == 0:
                raise ValueError(f"points {a}, {b}, {c} are collinear")
        return
    res = geom.general_position(pts, d)
    if not res:
        raise ValueError(f"points not in general position: {res.witness}")


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def max_hole(A: Sequence[Point], cap_size: int | None = None, algo: str = "auto",
             caps: HoleCaps | None = None, check_general_position: bool = True) -> HoleReport:
    """Size of the largest hole, with a witness.

    ``algo`` is ``"dp2d"`` (planar dynamic program), ``"brute"`` (search over
    convex-position subsets), ``"naive"`` (every subset through the reference
    predicates; small inputs only) or ``"auto"`` (``dp2d`` in the plane,
    ``brute`` otherwise). ``brute`` and ``naive`` stop growing subsets at
    ``cap_size`` and flag ``search_caps_hit`` if a hole of that size exists.
    """
    caps = caps or HoleCaps.from_env()
    pts = to_integer_points(A)
    n = len(pts)
    d = _dim(pts)
    cap_size = n if cap_size is None else cap_size
    if check_general_position:
        _check_general_position(pts, d)
    if algo == "auto":
        algo = "dp2d" if d == 2 else "brute"
    if n < d + 1:
        return HoleReport(0, (), True, False, algo, 0)
    hit = False
    if algo == "dp2d":
        if d != 2:
            raise ValueError("dp2d works in the plane only")
        size, witness, calls = kernels.empty_polygon_dp(pts)
    elif algo == "brute":
        if d == 2:
            size, witness, calls, hit = kernels.brute_max_hole_2d(pts, cap_size, caps.max_predicate_calls)
        else:
            size, witness, calls, hit = _brute_nd(pts, cap_size, caps.max_predicate_calls)
    elif algo == "naive":
        size, witness, calls, hit = _naive(pts, cap_size)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    witness = tuple(sorted(witness))
    verified = is_hole(pts, witness) if witness else size == 0
    return HoleReport(size, witness, verified, hit, algo, calls)


def _brute_nd(pts, cap_size, max_calls):
    n = len(pts)
    d = len(pts[0])
    st = {"best": 0, "witness": (), "calls": 0, "cap": False}

    def rec(chosen, start):
        for j in range(start, n):
            if st["cap"]:
                return
            S = chosen + [j]
            st["calls"] += 1
            if st["calls"] > max_calls:
                st["cap"] = True
                return
            if len(S) >= 2 and not _convex_nd(pts, S):
                continue
            if len(S) >= d + 1 and len(S) > st["best"] and _empty_nd(pts, S):
                st["best"], st["witness"] = len(S), tuple(S)
                if len(S) >= cap_size:
                    st["cap"] = True
                    return
            if len(S) < cap_size:
                rec(S, j + 1)

    rec([], 0)
    return st["best"], st["witness"], st["calls"], st["cap"]


def _naive(pts, cap_size):
    """Largest hole by testing every subset, largest sizes first."""
    n = len(pts)
    d = len(pts[0])
    calls = 0
    for size in range(min(n, cap_size), d, -1):
        for S in combinations(range(n), size):
            calls += 1
            if is_hole(pts, S):
                return size, S, calls, size == cap_size and size < n
    return 0, (), calls, False


def count_holes(A: Sequence[Point], ell: int) -> int:
    """Number of ``ell``-subsets of ``A`` that are holes."""
    pts = to_integer_points(A)
    d = _dim(pts)
    if ell < d + 1 or ell > len(pts):
        return 0
    if d == 2:
        return kernels.count_holes_2d(pts, ell)
    total = 0
    n = len(pts)

    def rec(chosen, start):
        nonlocal total
        for j in range(start, n):
            S = chosen + [j]
            if len(S) >= 2 and not _convex_nd(pts, S):
                continue
            if len(S) == ell:
                total += _empty_nd(pts, S)
            else:
                rec(S, j + 1)

    rec([], 0)
    return total
