"""Shared builders and independent reference implementations for the tests.

The oracles here deliberately avoid the package's hull, LP and kernel code:
membership in a hull is decided through simplices spanned by subset points
(Caratheodory), using only orientation signs.
"""

from fractions import Fraction
from itertools import combinations, product
from math import floor

from holefree.geom import orientation
from holefree.goodset import to_binary_almost_net
from holefree.netgen import AlmostNetParams, sequence_to_net, sobol_points, vdc_points


def pipeline_keys(d, n):
    """Binary almost net from the (0, n, d)-net used by the pipeline (T=1, eps=0)."""
    m = n + 1
    seq = vdc_points(n, m) if d == 2 else sobol_points(d - 1, n, m)
    X = sequence_to_net(seq, 0, n, m)
    return to_binary_almost_net(X, AlmostNetParams(1, 0, n), d)


def random_gp_points(rng, n, d, R=1000):
    """``n`` distinct integer points with no ``d+1`` on a common hyperplane."""
    pts = []
    while len(pts) < n:
        p = tuple(rng.randint(-R, R) for _ in range(d))
        if p in pts:
            continue
        if any(orientation(list(S) + [p]) == 0 for S in combinations(pts, d)):
            continue
        pts.append(p)
    return pts


# ---------------------------------------------------------------- nets

def naive_box_counts(X, level):
    """Count of points per dyadic box, for every split of ``level`` over the axes."""
    s = X[0].s
    vals = [p.values() for p in X]
    out = {}
    for ks in product(range(level + 1), repeat=s):
        if sum(ks) != level:
            continue
        for bs in product(*(range(1 << k) for k in ks)):
            out[ks, bs] = sum(1 for v in vals
                              if all(floor(x * (1 << k)) == b for x, k, b in zip(v, ks, bs)))
    return out


def naive_is_net(X, t, m):
    return all(c == 1 << t for c in naive_box_counts(X, m - t).values())


# ---------------------------------------------------------------- holes

def _in_open_simplex(q, simplex):
    """``q`` strictly inside the full-dimensional simplex (orientation signs only)."""
    base = orientation(simplex)
    if base == 0:
        return False
    for i in range(len(simplex)):
        moved = list(simplex)
        moved[i] = q
        if orientation(moved) != base:
            return False
    return True


def in_hull_interior_gp(q, S, d):
    """Interior membership for point sets in general position."""
    return any(_in_open_simplex(q, list(T)) for T in combinations(S, d + 1))


def convex_position_gp(S, d):
    return not any(in_hull_interior_gp(p, [x for x in S if x != p], d) for p in S)


def naive_is_hole(A, idx, d):
    S = [A[i] for i in idx]
    if len(S) < d + 1 or not convex_position_gp(S, d):
        return False
    inS = set(idx)
    return not any(in_hull_interior_gp(A[j], S, d) for j in range(len(A)) if j not in inS)


def naive_max_hole(A, d):
    n = len(A)
    for k in range(n, d, -1):
        for S in combinations(range(n), k):
            if naive_is_hole(A, S, d):
                return k
    return 0


def naive_hole_free(A, ell, d):
    """Definition check for general-position sets: every ell-subset has an interior point."""
    for S in combinations(range(len(A)), ell):
        P = [A[i] for i in S]
        if not any(in_hull_interior_gp(A[j], P, d) for j in range(len(A))):
            return False
    return True


def frac_points(pts):
    return [tuple(Fraction(v) for v in p) for p in pts]
