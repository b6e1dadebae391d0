"""The compiled kernels must agree with the pure-Python ones call for call."""

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_gp_points
from holefree import kernels

pytest.importorskip("holefree._ckernels")
from holefree import _ckernels as C  # noqa: E402
from holefree import _pykernels as P  # noqa: E402


def test_backend_selection():
    assert kernels.BACKEND in ("python", "cython")
    assert set(kernels.backends()) == {"python", "cython"}


def gp_sets(n_lo, n_hi, R):
    return st.builds(lambda seed, n: random_gp_points(random.Random(seed), n, 2, R),
                     st.integers(0, 10**6), st.integers(n_lo, n_hi))


@settings(max_examples=60, deadline=None)
@given(gp_sets(3, 11, 300))
def test_dp_and_brute_agree(pts):
    assert C.empty_polygon_dp(pts) == P.empty_polygon_dp(pts)
    assert C.brute_max_hole_2d(pts, len(pts), 10**7) == P.brute_max_hole_2d(pts, len(pts), 10**7)
    assert C.brute_max_hole_2d(pts, 4, 50) == P.brute_max_hole_2d(pts, 4, 50)


@settings(max_examples=60, deadline=None)
@given(gp_sets(4, 10, 300), st.integers(3, 6), st.integers(5, 10**5))
def test_scan_and_count_agree(pts, ell, budget):
    ell = min(ell, len(pts))
    assert C.holefree_scan_2d(pts, ell, budget) == P.holefree_scan_2d(pts, ell, budget)
    assert C.count_holes_2d(pts, ell) == P.count_holes_2d(pts, ell)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=1, max_size=12, unique=True))
def test_hull_agrees_on_degenerate_input(pts):
    idx = tuple(range(len(pts)))
    assert C.hull2d(pts, idx) == P.hull2d(pts, idx)


def test_big_coordinates_fall_back_to_exact_path():
    rng = random.Random(1)
    pts = random_gp_points(rng, 9, 2)
    big = [(x * 2**200 + 1, y * 2**200 + 3) for x, y in pts]
    assert C.empty_polygon_dp(big) == P.empty_polygon_dp(big)
    assert C.count_holes_2d(big, 4) == P.count_holes_2d(big, 4)
    edge = [(x + (1 << 30) - 1000, y) for x, y in pts]
    assert C.empty_polygon_dp(edge) == P.empty_polygon_dp(edge)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 8), st.integers(0, 2**32 - 1), st.data())
def test_box_violation_agrees(s, level, seed, data):
    rng = np.random.default_rng(seed)
    n = 1 << level
    codes = rng.integers(0, 1 << level, size=(n, s), dtype=np.uint64)
    ks = data.draw(st.lists(st.integers(0, level), min_size=s, max_size=s).filter(lambda k: sum(k) == level))
    for lo, hi in ((1, 1), (0, 2), (1, 3)):
        assert C.box_violation(codes, level, ks, lo, hi) == P.box_violation(codes, level, ks, lo, hi)
