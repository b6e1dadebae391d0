"""Base-2 digital nets and sequences, and their equidistribution verifiers.

Points keep explicit binary digit arrays per coordinate. A coordinate with
digits ``(y1, y2, ..., yk)`` is the dyadic rational ``sum(yj / 2**j)``; any
further digits are zero by construction, so truncation never has to guess
an expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, comb, floor
from typing import Iterator, Sequence

import numpy as np

from holefree import kernels

__all__ = [
    "NetPoint",
    "DyadicBox",
    "NetParams",
    "AlmostNetParams",
    "NetCheck",
    "SOBOL_INIT",
    "MAX_SOBOL_DIM",
    "vdc_points",
    "sobol_points",
    "sequence_to_net",
    "truncate",
    "compositions",
    "iter_dyadic_boxes",
    "verify_net",
    "minimal_t",
    "verify_almost_net",
    "expected_box_checks",
]


@dataclass(frozen=True)
class NetPoint:
    coords: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for digits in self.coords:
            if any(b not in (0, 1) for b in digits):
                raise ValueError(f"non-binary digit in {digits}")

    @classmethod
    def from_strings(cls, strings: Sequence[str]) -> "NetPoint":
        return cls(tuple(tuple(int(ch) for ch in s) for s in strings))

    @classmethod
    def from_ints(cls, values: Sequence[int], digits: int) -> "NetPoint":
        """Point whose coordinate ``i`` is ``values[i] / 2**digits``."""
        out = []
        for v in values:
            if not 0 <= v < (1 << digits) or (digits == 0 and v):
                raise ValueError(f"{v} does not fit in {digits} binary digits")
            out.append(tuple((v >> (digits - 1 - j)) & 1 for j in range(digits)))
        return cls(tuple(out))

    @property
    def s(self) -> int:
        return len(self.coords)

    @property
    def min_digits(self) -> int:
        return min((len(c) for c in self.coords), default=0)

    def strings(self) -> list[str]:
        return ["".join(map(str, c)) for c in self.coords]

    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(_digits_to_int(c, len(c)), 1 << len(c)) for c in self.coords)

    def to_ints(self, k: int) -> tuple[int, ...]:
        """``floor(y * 2**k)`` per coordinate, read from the first ``k`` digits."""
        if k > self.min_digits:
            raise ValueError(f"point stores {self.min_digits} digits, {k} requested")
        return tuple(_digits_to_int(c, k) for c in self.coords)


def _digits_to_int(digits: Sequence[int], k: int) -> int:
    v = 0
    for b in digits[:k]:
        v = (v << 1) | b
    return v


@dataclass(frozen=True)
class DyadicBox:
    """Product of intervals ``[b/2**k, (b+1)/2**k)``, one per axis."""

    ks: tuple[int, ...]
    bs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.ks) != len(self.bs):
            raise ValueError("ks and bs differ in length")
        for k, b in zip(self.ks, self.bs):
            if k < 0 or not 0 <= b < (1 << k):
                raise ValueError(f"bad box axis (k={k}, b={b})")

    @property
    def volume(self) -> Fraction:
        return Fraction(1, 1 << sum(self.ks))

    def contains(self, p: NetPoint) -> bool:
        return all(_digits_to_int(c, k) == b for c, k, b in zip(p.coords, self.ks, self.bs))


@dataclass(frozen=True)
class NetParams:
    t: int
    m: int
    s: int

    def __post_init__(self) -> None:
        if not 0 <= self.t <= self.m or self.s < 1:
            raise ValueError(f"invalid net parameters {self}")


@dataclass(frozen=True)
class AlmostNetParams:
    T: int
    eps: Fraction
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.T < 1 or self.n < 0 or not 0 <= self.eps < 1:
            raise ValueError(f"invalid almost-net parameters {self}")

    @property
    def size(self) -> int:
        return (1 << self.n) * self.T


@dataclass(frozen=True)
class NetCheck:
    """Outcome of a net or almost-net check.

    ``box``/``count`` describe the first offending box in enumeration order
    (compositions in lexicographic order, then box index) when ``ok`` is False.
    """

    ok: bool
    box: DyadicBox | None = None
    count: int | None = None
    boxes_checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


# Initial direction numbers (degree, polynomial coefficients, m_1..m_deg) for
# Sobol' dimensions 2..10; dimension 1 is the van der Corput sequence.
SOBOL_INIT: tuple[tuple[int, int, tuple[int, ...]], ...] = (
    (1, 0, (1,)),
    (2, 1, (1, 3)),
    (3, 1, (1, 3, 1)),
    (3, 2, (1, 1, 1)),
    (4, 1, (1, 1, 3, 3)),
    (4, 4, (1, 3, 5, 13)),
    (5, 2, (1, 1, 5, 5, 17)),
    (5, 4, (1, 1, 5, 5, 5)),
    (5, 7, (1, 1, 7, 11, 19)),
)
MAX_SOBOL_DIM = len(SOBOL_INIT) + 1


def _direction_ints(dim: int, m: int) -> list[int]:
    """Direction numbers ``v_k = m_k / 2**k`` scaled to ``m``-digit integers."""
    if dim == 0:
        ms = [1] * m
    else:
        deg, a, init = SOBOL_INIT[dim - 1]
        ms = list(init[:m])
        for k in range(deg, m):
            new = ms[k - deg] ^ (ms[k - deg] << deg)
            for j in range(1, deg):
                if (a >> (deg - 1 - j)) & 1:
                    new ^= ms[k - j] << j
            ms.append(new)
    return [mk << (m - k - 1) for k, mk in enumerate(ms)]


def vdc_points(m: int, digits: int | None = None) -> list[NetPoint]:
    """The ``2**m`` bit-reversed fractions, in index order."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    digits = m if digits is None else digits
    if digits < m:
        raise ValueError("digits must be at least m")
    out = []
    for i in range(1 << m):
        rev = tuple((i >> j) & 1 for j in range(m)) + (0,) * (digits - m)
        out.append(NetPoint((rev,)))
    return out


def sobol_points(s: int, m: int, digits: int | None = None) -> list[NetPoint]:
    """First ``2**m`` points of the ``s``-dimensional Sobol' sequence."""
    if not 1 <= s <= MAX_SOBOL_DIM:
        raise ValueError(f"unsupported dimension s={s}; supported 1..{MAX_SOBOL_DIM}")
    if m < 0:
        raise ValueError("m must be nonnegative")
    digits = m if digits is None else digits
    if digits < m:
        raise ValueError("digits must be at least m")
    dirs = [_direction_ints(dim, m) for dim in range(s)]
    out = []
    for n in range(1 << m):
        values = []
        for v in dirs:
            x = 0
            k = 0
            nn = n
            while nn:
                if nn & 1:
                    x ^= v[k]
                nn >>= 1
                k += 1
            values.append(x << (digits - m))
        out.append(NetPoint.from_ints(values, digits))
    return out


def truncate(p: NetPoint, m: int) -> NetPoint:
    """Keep the first ``m`` stored digits of every coordinate."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > p.min_digits:
        raise ValueError(f"cannot truncate to {m} digits; point stores {p.min_digits}")
    return NetPoint(tuple(c[:m] for c in p.coords))


def sequence_to_net(seq_points: Sequence[NetPoint], t: int, m: int,
                    digits: int | None = None) -> list[NetPoint]:
    """Lift a ``(t, s)``-sequence prefix to the ``2**m`` points ``([x_n]_m, n / 2**m)``.

    ``digits`` pads every coordinate with trailing zeros (the values are
    unchanged) for consumers that need more stored digits.
    """
    if m <= t:
        raise ValueError(f"need m > t, got m={m}, t={t}")
    N = 1 << m
    if len(seq_points) < N:
        raise ValueError(f"need {N} sequence points, got {len(seq_points)}")
    digits = m if digits is None else digits
    if digits < m:
        raise ValueError("digits must be at least m")
    pad = (0,) * (digits - m)
    out = []
    for n in range(N):
        x = seq_points[n]
        if x.min_digits < m:
            raise ValueError(f"sequence point {n} stores fewer than {m} digits")
        last = tuple((n >> (m - 1 - j)) & 1 for j in range(m))
        out.append(NetPoint(tuple(c[:m] + pad for c in x.coords) + (last + pad,)))
    return out


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` parts, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def iter_dyadic_boxes(s: int, level: int) -> Iterator[DyadicBox]:
    """Every dyadic box in ``[0,1)^s`` with ``sum(k_i) = level``."""
    for ks in compositions(level, s):
        for bs in product(*(range(1 << k) for k in ks)):
            yield DyadicBox(ks, bs)


def _check_boxes(X: Sequence[NetPoint], s: int, level: int, lo: Fraction, hi: Fraction) -> NetCheck:
    for i, p in enumerate(X):
        if p.s != s:
            raise ValueError(f"point {i} has dimension {p.s}, expected {s}")
        if p.min_digits < level:
            raise ValueError(f"point {i} stores {p.min_digits} digits, {level} needed")
    if level > 63:
        raise ValueError("box levels above 63 bits are not supported")
    codes = np.array([p.to_ints(level) for p in X], dtype=np.uint64).reshape(len(X), s)
    lo_i, hi_i = ceil(lo), floor(hi)
    checked = 0
    for ks in compositions(level, s):
        hit = kernels.box_violation(codes, level, ks, lo_i, hi_i)
        nboxes = 1 << level
        if hit is not None:
            index, count = hit
            bs = []
            for k in reversed(ks):
                bs.append(index & ((1 << k) - 1))
                index >>= k
            return NetCheck(False, DyadicBox(ks, tuple(reversed(bs))), count, checked + 1)
        checked += nboxes
    return NetCheck(True, boxes_checked=checked)


def verify_net(X: Sequence[NetPoint], t: int, m: int, s: int) -> NetCheck:
    """Every dyadic box of volume ``2**(t - m)`` holds exactly ``2**t`` points."""
    NetParams(t, m, s)
    if len(X) != 1 << m:
        raise ValueError(f"|X| = {len(X)} but 2^m = {1 << m}")
    return _check_boxes(X, s, m - t, Fraction(1 << t), Fraction(1 << t))


def minimal_t(X: Sequence[NetPoint], m: int, s: int) -> int | None:
    """Smallest ``t`` in ``[0, m]`` for which ``X`` is a ``(t, m, s)``-net."""
    if len(X) != 1 << m:
        raise ValueError(f"|X| = {len(X)} but 2^m = {1 << m}")
    for t in range(m + 1):
        if verify_net(X, t, m, s):
            return t
    return None


def verify_almost_net(X: Sequence[NetPoint], params: AlmostNetParams) -> NetCheck:
    """Every box of volume ``2**-n`` holds between ``(1-eps)T`` and ``(1+eps)T`` points."""
    if len(X) != params.size:
        raise ValueError(f"|X| = {len(X)} but 2^n T = {params.size}")
    if not X:
        raise ValueError("almost nets are nonempty")
    s = X[0].s
    lo = (1 - params.eps) * params.T
    hi = (1 + params.eps) * params.T
    return _check_boxes(X, s, params.n, lo, hi)


def expected_box_checks(t: int, m: int, s: int) -> int:
    """Number of boxes ``verify_net`` examines on a passing input."""
    return comb(m - t + s - 1, s - 1) << (m - t)
