"""Horton-like embedding of bitstring keys into exact integer points.

A key ``(a^1, ..., a^d)`` maps to the point whose ``i``-th coordinate is
``sum_j a^i_j * t[i][j]``. The scales form one increasing chain, ordered by
rank ``r(i, j) = (i - 1) m + (m - j + 1)``, and each scale is at least twice
the previous one, so coordinate order matches lexicographic key order.

Which scales are "large enough" for the hole-free guarantee is not computed
in closed form. Two schedules are offered and :func:`certify_embedding`
checks the result with the exact hole oracle, squaring ``B`` on failure:

``geometric``
    ``t = B ** rank``. Successive scales differ by the constant factor ``B``.
``squaring``
    ``t = B ** (2 ** (rank - 1))``, so every scale is the square of the
    previous one and exceeds the whole extent built so far. A constant ratio
    is not enough for the interior-witness descent: a point of a middle band
    can end up outside the hull when the band above it sits only ``B`` times
    higher while the horizontal extent is ``B ** m``. This is the default.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from holefree import geom
from holefree.goodset import BinaryAlmostNet, PointKey
from holefree.holes import HoleCaps, HoleFreeResult, is_hole_free

log = logging.getLogger(__name__)

__all__ = [
    "ScaleSchedule",
    "LatticePoint",
    "CertifyResult",
    "PerturbReport",
    "default_base",
    "build_schedule",
    "embed",
    "certify_embedding",
    "perturb_to_general_position",
]


GROWTHS = ("geometric", "squaring")


@dataclass(frozen=True)
class ScaleSchedule:
    d: int
    m: int
    base: int
    t_values: tuple[tuple[int, ...], ...]  # t_values[i-1][j-1] = t_{i,j}
    growth: str = "geometric"

    def rank(self, i: int, j: int) -> int:
        """Position of ``t_{i,j}`` in the increasing chain (1-based ``i``, ``j``)."""
        return (i - 1) * self.m + (self.m - j + 1)

    def t(self, i: int, j: int) -> int:
        return self.t_values[i - 1][j - 1]

    def chain(self) -> list[int]:
        """All scales in rank order."""
        out = [0] * (self.d * self.m)
        for i in range(1, self.d + 1):
            for j in range(1, self.m + 1):
                out[self.rank(i, j) - 1] = self.t(i, j)
        return out


@dataclass(frozen=True)
class LatticePoint:
    coords: tuple[int, ...]
    key: PointKey | None = None


def default_base(m: int, growth: str = "geometric") -> int:
    return 1 << (2 * m) if growth == "geometric" else 2


def build_schedule(d: int, m: int, base: int | None = None, growth: str = "geometric") -> ScaleSchedule:
    """Scales ``t_{i,j} = base ** e(r(i, j))`` with ``e(r) = r`` or ``2 ** (r - 1)``.

    The default base is ``2 ** (2m)`` for the geometric schedule and 2 for
    the squaring one.
    """
    if d < 1 or m < 1:
        raise ValueError(f"need d >= 1 and m >= 1, got d={d}, m={m}")
    if growth not in GROWTHS:
        raise ValueError(f"growth must be one of {GROWTHS}, got {growth!r}")
    base = default_base(m, growth) if base is None else base
    if base < 2:
        raise ValueError("base must be at least 2")

    def exponent(r: int) -> int:
        return r if growth == "geometric" else 1 << (r - 1)

    rows = tuple(
        tuple(base ** exponent((i - 1) * m + (m - j + 1)) for j in range(1, m + 1))
        for i in range(1, d + 1)
    )
    return ScaleSchedule(d, m, base, rows, growth)


def embed(Y: BinaryAlmostNet | Iterable[PointKey], sched: ScaleSchedule) -> list[LatticePoint]:
    """Map every key to its lattice point, keeping the key for audit."""
    keys = list(Y.keys) if isinstance(Y, BinaryAlmostNet) else list(Y)
    out = []
    for key in keys:
        if len(key) != sched.d or any(len(c) != sched.m for c in key):
            raise ValueError(f"key {key} does not match schedule d={sched.d}, m={sched.m}")
        coords = tuple(
            sum(sched.t_values[i][j] for j, bit in enumerate(comp) if bit == "1")
            for i, comp in enumerate(key)
        )
        out.append(LatticePoint(coords, key))
    return out


@dataclass(frozen=True)
class CertifyResult:
    status: str  # "certified" | "escalate" | "cap_exceeded"
    schedule: ScaleSchedule
    ell: int
    attempts: tuple[tuple[int, str], ...]  # (base, oracle status) per attempt
    oracle: HoleFreeResult | None = None

    @property
    def ok(self) -> bool:
        return self.status == "certified"

    @property
    def next_base(self) -> int:
        return self.schedule.base ** 2


def certify_embedding(Y: BinaryAlmostNet | Iterable[PointKey], q: int, sched: ScaleSchedule,
                      caps: HoleCaps | None = None, max_escalations: int = 3) -> CertifyResult:
    """Confirm with the exact oracle that the embedding is ``(2^(d-1) q + 1)``-hole-free.

    On a violation the base is squared and the check repeated, at most
    ``max_escalations`` times; if the last attempt still fails the result is
    ``"escalate"`` and ``next_base`` is the base to try next.
    """
    keys = list(Y.keys) if isinstance(Y, BinaryAlmostNet) else list(Y)
    ell = (1 << (sched.d - 1)) * q + 1
    attempts: list[tuple[int, str]] = []
    for attempt in range(max_escalations + 1):
        pts = [p.coords for p in embed(keys, sched)]
        res = is_hole_free(pts, ell, caps)
        attempts.append((sched.base, res.status))
        log.info("certify: base=%d ell=%d -> %s", sched.base, ell, res.status)
        if res.status == "pass":
            return CertifyResult("certified", sched, ell, tuple(attempts), res)
        if res.status == "cap_exceeded":
            return CertifyResult("cap_exceeded", sched, ell, tuple(attempts), res)
        if attempt < max_escalations:
            sched = build_schedule(sched.d, sched.m, sched.base ** 2, sched.growth)
    return CertifyResult("escalate", sched, ell, tuple(attempts), res)


@dataclass(frozen=True)
class PerturbReport:
    seed: int
    attempts: int
    min_gap: int | Fraction
    bound: Fraction
    max_offset: Fraction
    seed_trail: tuple[int, ...] = field(default=())
    hole_free_checked: bool = False
    hole_free_after: str | None = None


def _offset(seed: int, attempt: int, index: int, axis: int, bits: int = 64) -> int:
    msg = f"{seed}:{attempt}:{index}:{axis}".encode()
    return int.from_bytes(hashlib.blake2b(msg, digest_size=bits // 8).digest(), "big")


def _min_gap(points: Sequence[Sequence[Fraction]]) -> Fraction:
    gaps = []
    for axis in range(len(points[0])):
        vals = sorted(set(p[axis] for p in points))
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        if diffs:
            gaps.append(min(diffs))
    if not gaps:
        return Fraction(1)
    return min(gaps)


def perturb_to_general_position(points: Sequence[LatticePoint | Sequence[int | Fraction]], seed: int,
                                max_retries: int = 8, check_ell: int | None = None,
                                caps: HoleCaps | None = None
                                ) -> tuple[list[tuple[Fraction, ...]], PerturbReport]:
    """Add tiny deterministic rational offsets until the set is in general position.

    Every offset is strictly below ``g / (4 n^2)`` in absolute value, where
    ``g`` is the smallest nonzero gap between coordinate values on any axis.
    Offsets depend only on ``(seed, attempt, point index, axis)``, so output
    is reproducible. With ``check_ell`` the perturbed set is also run through
    the hole-free oracle.
    """
    raw = [p.coords if isinstance(p, LatticePoint) else p for p in points]
    pts = [geom.as_point(p) for p in raw]
    n = len(pts)
    if len(set(pts)) != n:
        raise ValueError("points must be distinct")
    d = len(pts[0])
    g = _min_gap(pts)
    bound = g / (4 * n * n)
    bits = 64
    half = 1 << bits
    trail = []
    for attempt in range(max_retries):
        trail.append(attempt)
        out = []
        max_off = Fraction(0)
        for idx, p in enumerate(pts):
            row = []
            for axis in range(d):
                u = _offset(seed, attempt, idx, axis, bits)
                # (2u - (2^64 - 1)) / 2^64 lies strictly inside (-1, 1)
                delta = bound * Fraction(2 * u - (half - 1), half)
                max_off = max(max_off, abs(delta))
                row.append(p[axis] + delta)
            out.append(tuple(row))
        if geom.general_position(out, d):
            status = None
            if check_ell is not None:
                status = is_hole_free(out, check_ell, caps).status
            report = PerturbReport(seed, attempt + 1, g, bound, max_off, tuple(trail),
                                   check_ell is not None, status)
            return out, report
        log.info("perturb: attempt %d not in general position, redrawing", attempt)
    raise RuntimeError(f"no general-position perturbation after {max_retries} attempts "
                       f"(seed {seed}, attempts {trail})")
