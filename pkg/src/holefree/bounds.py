"""Closed-form upper bounds on the largest guaranteed hole size h(d).

All arithmetic is on integers and fractions. Square roots are bracketed with
:func:`math.isqrt`, never evaluated in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import floor, isqrt

__all__ = [
    "KNOWN_SEQUENCE_T",
    "PUBLISHED_H",
    "BoundRow",
    "hd_upper_from_net",
    "hd_upper_from_almost_net",
    "xn_t_bound",
    "valtr_upper",
    "primorial",
    "theorem1_check",
    "bounds_table",
    "almost_net_T",
    "almost_net_ratio",
]

# Smallest t of known base-2 (t, s)-sequences for small s; s = 1 is van der Corput.
KNOWN_SEQUENCE_T = {1: 0, 2: 0, 3: 1, 4: 1, 5: 2}

# Published values of the upper bound for small d, kept for comparison.
PUBLISHED_H = {3: 32, 4: 240, 5: 988, 6: 8000}
VALTR_H3 = 22


def ceil_sqrt_fraction(x: Fraction) -> int:
    """Smallest integer ``k >= 0`` with ``k*k >= x``."""
    x = Fraction(x)
    if x <= 0:
        return 0
    k = isqrt(x.numerator // x.denominator)
    while k * k < x:
        k += 1
    return k


def hd_upper_from_net(t: int, d: int) -> int:
    """``2^d (2^(t+d-1) - 2^t + 1)``: hole bound from a ``(t, m, d)``-net."""
    if t < 0 or d < 2:
        raise ValueError(f"need t >= 0 and d >= 2, got t={t}, d={d}")
    return (1 << d) * ((1 << (t + d - 1)) - (1 << t) + 1)


def hd_upper_from_almost_net(T: int, eps: Fraction | int | str, d: int) -> int:
    """``floor(2^d (2^(d-1) (1+eps) T - (1-eps) T + 1))`` from a ``(T, eps)``-almost net."""
    eps = Fraction(eps)
    if T < 1 or not 0 <= eps < 1 or d < 2:
        raise ValueError(f"need T >= 1, 0 <= eps < 1, d >= 2; got T={T}, eps={eps}, d={d}")
    return floor((1 << d) * ((1 << (d - 1)) * (1 + eps) * T - (1 - eps) * T + 1))


def xn_t_bound(s: int) -> int:
    """``floor(5s - 8 sqrt((s-1)/3) - 3)``, the quality bound for (t, s)-sequences."""
    if s < 1:
        raise ValueError("s must be positive")
    # 8 sqrt((s-1)/3) = sqrt(64 (s-1) / 3); floor(a - x) = a - ceil(x) for integer a
    return 5 * s - 3 - ceil_sqrt_fraction(Fraction(64 * (s - 1), 3))


def primorial(k: int) -> int:
    """Product of the first ``k`` primes."""
    out, found, c = 1, 0, 2
    while found < k:
        if all(c % p for p in range(2, isqrt(c) + 1)):
            out *= c
            found += 1
        c += 1
    return out


def valtr_upper(d: int) -> int:
    """``2^(d-1) (P(d-1) + 1)`` with ``P`` the primorial."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return (1 << (d - 1)) * (primorial(d - 1) + 1)


@dataclass(frozen=True)
class BoundRow:
    d: int
    t_used: int
    source: str  # "sequence" (known table) | "xn" (general t bound)
    h_upper: int
    valtr_upper: int
    two_pow_7d: int
    passes: bool
    published: int | None = None
    note: str = ""


def theorem1_check(d_max: int) -> list[tuple[int, int, bool, bool]]:
    """For ``3 <= d <= d_max``: the net bound with ``t = xn_t_bound(d-1)`` against ``2^(7d)``.

    Each row is ``(d, bound, bound < 2^(7d), bound < 2^(7d - 8 sqrt((d-2)/3)))``.
    The refined comparison uses ``c = bound.bit_length()`` (so ``bound < 2^c``)
    and checks ``c <= 7d - 8 sqrt((d-2)/3)`` as ``64 (d-2) <= 3 (7d - c)^2``.
    """
    if d_max < 3:
        raise ValueError("d_max must be at least 3")
    rows = []
    for d in range(3, d_max + 1):
        h = hd_upper_from_net(xn_t_bound(d - 1), d)
        basic = h < 1 << (7 * d)
        c = h.bit_length()
        gap = 7 * d - c
        refined = gap >= 0 and 64 * (d - 2) <= 3 * gap * gap
        rows.append((d, h, basic, refined))
    return rows


def bounds_table(d_lo: int, d_hi: int) -> list[BoundRow]:
    """Rows for ``d_lo <= d <= d_hi`` using the best available ``t`` for ``s = d - 1``."""
    rows = []
    for d in range(max(d_lo, 2), d_hi + 1):
        s = d - 1
        if s in KNOWN_SEQUENCE_T:
            t, source = KNOWN_SEQUENCE_T[s], "sequence"
        else:
            t, source = xn_t_bound(s), "xn"
        h = hd_upper_from_net(t, d)
        published = PUBLISHED_H.get(d)
        note = ""
        if published is not None and published != h:
            note = f"published value {published} differs from formula value {h}"
        if d == 3:
            note = (note + "; " if note else "") + f"Valtr's special bound for d=3 is {VALTR_H3}"
        rows.append(BoundRow(d, t, source, h, valtr_upper(d), 1 << (7 * d), h < 1 << (7 * d),
                             published, note))
    return rows


def almost_net_T(d: int) -> int:
    """``ceil(900 d ln(2d))``, evaluated in 50-digit decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = 50
        v = Decimal(900 * d) * Decimal(2 * d).ln()
        return int(v.to_integral_value(rounding="ROUND_CEILING"))


def almost_net_ratio(d: int) -> Decimal:
    """Bound from a ``(ceil(900 d ln 2d), 1/3)``-almost net divided by ``4^d d ln d``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    h = hd_upper_from_almost_net(almost_net_T(d), Fraction(1, 3), d)
    with localcontext() as ctx:
        ctx.prec = 50
        return Decimal(h) / (Decimal(4 ** d) * d * Decimal(d).ln())
