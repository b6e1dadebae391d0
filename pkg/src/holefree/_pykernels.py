"""Pure-Python implementations of the hot loops.

``_ckernels.pyx`` implements the same functions with the same results; the
choice between them is made in :mod:`holefree.kernels`. Planar routines take
lists of ``(x, y)`` integer pairs. Coordinates may be arbitrarily large.

Status codes used by the scanning routines: 0 pass, 1 violation, 3 cap hit.
"""

from __future__ import annotations

from functools import cmp_to_key
from itertools import combinations

import numpy as np

BACKEND = "python"


def box_violation(codes, level, ks, lo, hi):
    """First dyadic box (for the axis split ``ks``) whose count leaves ``[lo, hi]``.

    ``codes`` is an ``(N, s)`` uint64 array holding ``floor(x_i * 2**level)``.
    The box index concatenates the leading ``k_i`` bits of each axis; counts
    come from sorting the indices, so empty boxes show up as gaps.
    Returns ``(index, count)`` or None.
    """
    n, s = codes.shape
    idx = np.zeros(n, dtype=np.uint64)
    for i in range(s):
        k = ks[i]
        idx = (idx << np.uint64(k)) | (codes[:, i] >> np.uint64(level - k))
    keys, counts = np.unique(idx, return_counts=True)
    expect = 0
    for key, c in zip(keys.tolist(), counts.tolist()):
        if key > expect and lo > 0:
            return expect, 0
        if c < lo or c > hi:
            return key, c
        expect = key + 1
    if expect < (1 << level) and lo > 0:
        return expect, 0
    return None


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull2d(pts, idx):
    """Strict convex hull (counter-clockwise, no collinear vertices) of ``pts[idx]``."""
    order = sorted(set(idx), key=lambda i: pts[i])
    if len(order) < 3:
        return order
    lower = []
    for i in order:
        while len(lower) >= 2 and cross(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper = []
    for i in reversed(order):
        while len(upper) >= 2 and cross(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _inside(pts, hull, q):
    h = len(hull)
    for t in range(h):
        if cross(pts[hull[t]], pts[hull[(t + 1) % h]], q) <= 0:
            return False
    return True


def holefree_scan_2d(pts, ell, max_calls):
    """Check that every ``ell``-subset has some point strictly inside its hull.

    Returns ``(status, witness, calls)``; ``witness`` is the first uncovered
    subset in lexicographic order.
    """
    n = len(pts)
    calls = 0
    for S in combinations(range(n), ell):
        hull = hull2d(pts, S)
        covered = False
        if len(hull) >= 3:
            on_hull = set(hull)
            # non-vertex members first: they are the likely interior points
            order = [i for i in S if i not in on_hull] + [i for i in range(n) if i not in S]
            for v in order:
                calls += 1
                if _inside(pts, hull, pts[v]):
                    covered = True
                    break
        else:
            calls += 1
        if not covered:
            return 1, S, calls
        if calls > max_calls:
            return 3, S, calls
    return 0, None, calls


def _angular_cmp(P, pts):
    def cmp(i, j):
        c = cross(P, pts[i], pts[j])
        if c > 0:
            return -1
        if c < 0:
            return 1
        di = (pts[i][0] - P[0]) ** 2 + (pts[i][1] - P[1]) ** 2
        dj = (pts[j][0] - P[0]) ** 2 + (pts[j][1] - P[1]) ** 2
        return (di > dj) - (di < dj)
    return cmp


def _triangle_empty(pts, a, b, c, n):
    A, B, C = pts[a], pts[b], pts[c]
    for q in range(n):
        if q == a or q == b or q == c:
            continue
        Q = pts[q]
        if cross(A, B, Q) > 0 and cross(B, C, Q) > 0 and cross(C, A, Q) > 0:
            return False
    return True


def empty_polygon_dp(pts):
    """Largest empty convex polygon of a planar set in general position.

    For each anchor taken as the lowest vertex, the other candidates are
    sorted by angle and a table over the last two vertices records the
    longest empty convex fan. Returns ``(size, witness, calls)``.
    """
    n = len(pts)
    best, witness = 0, ()
    calls = 0
    if n < 3:
        return best, witness, calls
    for p in range(n):
        P = pts[p]
        cand = [i for i in range(n)
                if pts[i][1] > P[1] or (pts[i][1] == P[1] and pts[i][0] > P[0])]
        cand.sort(key=cmp_to_key(_angular_cmp(P, pts)))
        k = len(cand)
        f = [[0] * k for _ in range(k)]
        parent = [[-1] * k for _ in range(k)]
        for b in range(k):
            cb = cand[b]
            for a in range(b):
                ca = cand[a]
                if cross(P, pts[ca], pts[cb]) <= 0:
                    continue
                calls += 1
                if not _triangle_empty(pts, p, ca, cb, n):
                    continue
                val, par = 3, -1
                fa, pa = f[a], pts[ca]
                for c in range(a):
                    if fa[c] + 1 > val and cross(pts[cand[c]], pa, pts[cb]) > 0:
                        val, par = fa[c] + 1, c
                f[b][a] = val
                parent[b][a] = par
                if val > best:
                    chain = [cb, ca]
                    x, y = b, a
                    while parent[x][y] != -1:
                        x, y = y, parent[x][y]
                        chain.append(cand[y])
                    best = val
                    witness = tuple(sorted(chain + [p]))
    return best, witness, calls


def _is_convex_2d(pts, S):
    return len(hull2d(pts, S)) == len(S)


def _empty_2d(pts, S, n):
    hull = hull2d(pts, S)
    inS = set(S)
    for q in range(n):
        if q not in inS and _inside(pts, hull, pts[q]):
            return False
    return True


def brute_max_hole_2d(pts, cap_size, max_calls):
    """Depth-first search over convex-position subsets, checking emptiness.

    Only convex position prunes the search (a set that is not in convex
    position cannot become so by adding points). Returns
    ``(size, witness, calls, caps_hit)``.
    """
    n = len(pts)
    state = {"best": 0, "witness": (), "calls": 0, "cap": False}

    def rec(chosen, start):
        for j in range(start, n):
            if state["cap"]:
                return
            S = chosen + [j]
            state["calls"] += 1
            if state["calls"] > max_calls:
                state["cap"] = True
                return
            if len(S) >= 3:
                if not _is_convex_2d(pts, S):
                    continue
                if len(S) > state["best"] and _empty_2d(pts, S, n):
                    state["best"] = len(S)
                    state["witness"] = tuple(S)
                    if len(S) >= cap_size:
                        state["cap"] = True
                        return
            if len(S) < cap_size:
                rec(S, j + 1)

    rec([], 0)
    return state["best"], state["witness"], state["calls"], state["cap"]


def count_holes_2d(pts, ell):
    """Number of ``ell``-subsets that are holes; convex position prunes the DFS."""
    n = len(pts)
    total = 0

    def rec(chosen, start):
        nonlocal total
        for j in range(start, n):
            S = chosen + [j]
            if len(S) >= 3 and not _is_convex_2d(pts, S):
                continue
            if len(S) == ell:
                if _empty_2d(pts, S, n):
                    total += 1
            else:
                rec(S, j + 1)

    if ell >= 3:
        rec([], 0)
    return total
