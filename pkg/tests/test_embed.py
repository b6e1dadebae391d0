import random
from fractions import Fraction

import pytest

from helpers import pipeline_keys
from holefree.embed import (LatticePoint, build_schedule, certify_embedding, default_base, embed,
                            perturb_to_general_position)
from holefree.geom import general_position, orientation
from holefree.goodset import good_bound
from holefree.holes import is_hole_free, max_hole

# Two interleaved clusters: the geometric schedule with B=2 squeezes them
# together and leaves an empty 7-gon, B=4 already separates them.
CLUSTERS = [("011", "101"), ("010", "011"), ("101", "100"), ("100", "000"),
            ("000", "110"), ("111", "001"), ("110", "010"), ("001", "111")]


def test_schedule_examples():
    s = build_schedule(1, 2, 2)
    assert s.t(1, 2) == 2 and s.t(1, 1) == 4
    s = build_schedule(2, 2, 16)
    assert s.chain() == [16, 256, 4096, 65536]
    assert [s.rank(i, j) for i in (1, 2) for j in (1, 2)] == [2, 1, 4, 3]


@pytest.mark.parametrize("growth", ["geometric", "squaring"])
@pytest.mark.parametrize("d,m,B", [(1, 3, 2), (2, 3, 3), (3, 2, 2), (2, 4, 5)])
def test_chain_at_least_doubles(d, m, B, growth):
    chain = build_schedule(d, m, B, growth).chain()
    assert all(b >= 2 * a for a, b in zip(chain, chain[1:]))
    if growth == "squaring":
        assert all(b == a * a for a, b in zip(chain, chain[1:]))
        # every scale dominates the sum of all smaller ones
        assert all(chain[k] > sum(chain[:k]) for k in range(len(chain)))


def test_default_bases():
    assert default_base(3) == 64 and build_schedule(2, 3).base == 64
    assert default_base(3, "squaring") == 2


def test_schedule_validation():
    with pytest.raises(ValueError):
        build_schedule(2, 3, 1)
    with pytest.raises(ValueError):
        build_schedule(0, 3)
    with pytest.raises(ValueError, match="growth"):
        build_schedule(2, 3, growth="cubic")


def test_embed_examples():
    s = build_schedule(1, 2, 2)
    pts = embed([("00",), ("01",), ("10",), ("11",)], s)
    assert [p.coords for p in pts] == [(0,), (2,), (4,), (6,)]
    assert embed([("000", "101")], build_schedule(2, 3, 2))[0].coords[0] == 0
    with pytest.raises(ValueError, match="does not match"):
        embed([("00", "1")], build_schedule(2, 2, 2))


@pytest.mark.parametrize("growth", ["geometric", "squaring"])
def test_coordinate_order_is_lex_order(growth):
    rng = random.Random(0)
    m, d = 6, 2
    s = build_schedule(d, m, 2, growth)
    for _ in range(1000):
        a = tuple("".join(rng.choice("01") for _ in range(m)) for _ in range(d))
        b = tuple("".join(rng.choice("01") for _ in range(m)) for _ in range(d))
        pa, pb = embed([a, b], s)
        for i in range(d):
            assert (pa.coords[i] < pb.coords[i]) == (a[i] < b[i])


def test_certify_small_pipeline_set_vacuously():
    Y = pipeline_keys(2, 3)
    res = certify_embedding(Y, 4, build_schedule(2, Y.m))
    assert res.ok and res.ell == 9 and res.attempts == ((1 << (2 * Y.m), "pass"),)
    assert res.oracle.vacuous


def test_escalation_on_interleaved_clusters():
    sched = build_schedule(2, 3, 2)
    res = certify_embedding(CLUSTERS, 3, sched, max_escalations=0)
    assert res.status == "escalate" and res.next_base == 4
    res = certify_embedding(CLUSTERS, 3, sched, max_escalations=2)
    assert res.ok and res.attempts == ((2, "violation"), (4, "pass"))
    assert res.schedule.base == 4


def test_certified_stays_certified_after_squaring():
    Y = pipeline_keys(2, 4)
    q = good_bound(1, 0, 2)
    first = certify_embedding(Y, q, build_schedule(2, Y.m, growth="squaring"))
    assert first.ok
    again = certify_embedding(Y, q, build_schedule(2, Y.m, first.schedule.base ** 2, "squaring"))
    assert again.ok and again.attempts[0][1] == "pass"


def test_certify_reports_caps():
    from holefree.holes import HoleCaps
    Y = pipeline_keys(2, 4)
    res = certify_embedding(Y, 4, build_schedule(2, Y.m, growth="squaring"), HoleCaps(10**9, 10))
    assert res.status == "cap_exceeded"


def test_perturb_collinear_points():
    out, rep = perturb_to_general_position([(0, 0), (1, 1), (2, 2)], seed=7)
    assert orientation(out) != 0
    assert rep.attempts >= 1 and rep.bound == Fraction(1, 36)
    assert all(abs(o - p) < rep.bound for q, pt in zip(out, [(0, 0), (1, 1), (2, 2)])
               for o, p in zip(q, pt))


def test_perturb_keeps_general_position_input():
    pts = [(0, 0), (7, 1), (3, 9), (10, 12)]
    out, rep = perturb_to_general_position([LatticePoint(p) for p in pts], seed=1)
    assert general_position(out) and rep.attempts == 1
    assert rep.max_offset < rep.bound


def test_perturb_is_deterministic_and_seed_dependent():
    pts = [(0, 0), (1, 1), (2, 2), (4, 0)]
    a, _ = perturb_to_general_position(pts, seed=3)
    b, _ = perturb_to_general_position(pts, seed=3)
    c, _ = perturb_to_general_position(pts, seed=4)
    assert a == b and a != c


def test_perturb_rejects_duplicates():
    with pytest.raises(ValueError, match="distinct"):
        perturb_to_general_position([(0, 0), (0, 0)], seed=0)


def test_perturb_gives_up_after_retries(monkeypatch):
    import holefree.embed as emb
    monkeypatch.setattr(emb, "_offset", lambda *a, **k: (1 << 63))
    with pytest.raises(RuntimeError, match="attempts"):
        perturb_to_general_position([(0, 0), (1, 1), (2, 2)], seed=0, max_retries=2)


def test_max_hole_unchanged_by_perturbation():
    Y = pipeline_keys(2, 4)
    res = certify_embedding(Y, 4, build_schedule(2, Y.m, growth="squaring"))
    pts = [p.coords for p in embed(Y, res.schedule)]
    assert general_position(pts)
    out, rep = perturb_to_general_position(pts, seed=0, check_ell=9)
    assert rep.hole_free_after == "pass"
    assert max_hole(pts).hole_size == max_hole(out).hole_size == 6
    assert is_hole_free(out, 9)
