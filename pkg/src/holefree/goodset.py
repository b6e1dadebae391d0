"""Binary almost nets and q-good sets of bitstring tuples.

A key is a tuple of ``d`` equal-length strings over ``"01"``. Strings make
prefix tests (``str.startswith``) and lexicographic comparison (``<``) exact
and cheap, which is all the combinatorial layer needs.
"""

from __future__ import annotations

import logging
from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, floor
from typing import Callable, Iterable, Iterator, Sequence

from holefree.netgen import AlmostNetParams, NetPoint

log = logging.getLogger(__name__)

BitString = str
PointKey = tuple[str, ...]

__all__ = [
    "BitString",
    "PointKey",
    "BinaryAlmostNet",
    "GoodCheck",
    "GoodCaps",
    "WitnessStep",
    "ceil_log2",
    "is_prefix",
    "parent",
    "to_binary_almost_net",
    "prefix_set",
    "good_bound",
    "verify_good",
    "minimal_good_q",
    "find_interior_witness",
]


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("ceil_log2 needs a positive integer")
    return (x - 1).bit_length()


def is_prefix(a: BitString, b: BitString) -> bool:
    return b.startswith(a)


def parent(a: BitString) -> BitString:
    """The string with its last bit removed."""
    if not a:
        raise ValueError("the empty string has no parent")
    return a[:-1]


def _strings(length: int) -> Iterator[str]:
    if length == 0:
        yield ""
        return
    for v in range(1 << length):
        yield format(v, f"0{length}b")


@dataclass(frozen=True)
class BinaryAlmostNet:
    keys: tuple[PointKey, ...]
    T: int
    eps: Fraction
    n: int
    m: int
    d: int
    # audit: for each key, the index of the net point it came from
    source: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", Fraction(self.eps))
        for k in self.keys:
            if len(k) != self.d or any(len(c) != self.m for c in k):
                raise ValueError(f"key {k} does not have {self.d} components of length {self.m}")

    def __len__(self) -> int:
        return len(self.keys)

    def invariant_violations(self, limit: int = 10) -> list[str]:
        """Re-check the defining properties; an empty list means all hold."""
        out: list[str] = []
        if self.m != self.n + ceil_log2(self.T) + 1:
            out.append(f"m={self.m} but n + ceil(log2 T) + 1 = {self.n + ceil_log2(self.T) + 1}")
        for i in range(self.d):
            column = [k[i] for k in self.keys]
            if len(set(column)) != len(column):
                out.append(f"coordinate {i + 1} is not injective")
        lo0 = (1 - self.eps) * self.T
        hi0 = (1 + self.eps) * self.T
        for lengths in _length_tuples(self.d, self.n):
            scale = 1 << (self.n - sum(lengths))
            counts = _prefix_counts(self.keys, lengths)
            for prefixes in product(*(_strings(L) for L in lengths)):
                c = counts.get(prefixes, 0)
                if not scale * lo0 <= c <= scale * hi0:
                    out.append(f"|I{prefixes}| = {c} outside [{scale * lo0}, {scale * hi0}]")
                    if len(out) >= limit:
                        return out
        return out


def _length_tuples(d: int, total_max: int) -> Iterator[tuple[int, ...]]:
    for lengths in product(range(total_max + 1), repeat=d):
        if sum(lengths) <= total_max:
            yield lengths


def _prefix_counts(keys: Sequence[PointKey], lengths: Sequence[int]) -> dict:
    counts: dict[tuple[str, ...], int] = defaultdict(int)
    for k in keys:
        counts[tuple(c[:L] for c, L in zip(k, lengths))] += 1
    return counts


def to_binary_almost_net(X: Sequence[NetPoint], params: AlmostNetParams, d: int) -> BinaryAlmostNet:
    """Round an almost net to ``m``-bit keys and make every coordinate injective.

    Here ``m = n + ceil(log2 T) + 1``. Coordinate ``i`` of a point becomes
    ``floor(x_i * 2**m)`` in binary. Where two points would share a value, the
    whole class of points sharing its ``n``-bit prefix is sorted (by the
    coordinate's stored digits, then the full point, then input index) and
    given tails ``0, 1, 2, ...`` in the last ``ceil(log2 T) + 1`` bits.
    """
    if len(X) != params.size:
        raise ValueError(f"|X| = {len(X)} but 2^n T = {params.size}")
    n, T = params.n, params.T
    r = ceil_log2(T) + 1
    m = n + r
    columns: list[list[str]] = []
    for i in range(d):
        raw = []
        for idx, p in enumerate(X):
            if p.s != d:
                raise ValueError(f"point {idx} has dimension {p.s}, expected {d}")
            if len(p.coords[i]) < m:
                raise ValueError(f"point {idx} stores {len(p.coords[i])} digits in coordinate {i + 1}, "
                                 f"{m} needed")
            raw.append("".join(map(str, p.coords[i][:m])))
        col = list(raw)
        classes: dict[str, list[int]] = defaultdict(list)
        for idx, y in enumerate(raw):
            classes[y[:n]].append(idx)
        for head, members in classes.items():
            if len({raw[j] for j in members}) == len(members):
                continue
            if len(members) > 1 << r:
                raise ValueError(f"{len(members)} points share the {n}-bit prefix {head!r} in coordinate "
                                 f"{i + 1}; at most {1 << r} fit (input is not a valid almost net)")
            members = sorted(members, key=lambda j: (X[j].coords[i], X[j].coords, j))
            for tail, j in enumerate(members):
                col[j] = head + format(tail, f"0{r}b")
            log.debug("coordinate %d: reassigned tails in class %r (%d points)", i + 1, head, len(members))
        columns.append(col)
    keys = tuple(tuple(columns[i][idx] for i in range(d)) for idx in range(len(X)))
    return BinaryAlmostNet(keys, T, params.eps, n, m, d, source=tuple(range(len(X))))


def _key_list(Y: BinaryAlmostNet | Iterable[PointKey]) -> list[PointKey]:
    return list(Y.keys) if isinstance(Y, BinaryAlmostNet) else list(Y)


def prefix_set(Y: BinaryAlmostNet | Iterable[PointKey], prefixes: Sequence[BitString]) -> list[PointKey]:
    """Keys whose ``i``-th component starts with ``prefixes[i]``, in input order."""
    keys = _key_list(Y)
    if keys and len(prefixes) != len(keys[0]):
        raise ValueError(f"{len(prefixes)} prefixes for keys of dimension {len(keys[0])}")
    return [k for k in keys if all(c.startswith(a) for c, a in zip(k, prefixes))]


def good_bound(T: int, eps: Fraction | int | str, d: int) -> int:
    """``floor(2**d (1+eps) T - 2 (1-eps) T + 2)``, computed exactly."""
    eps = Fraction(eps)
    if T < 1 or not 0 <= eps < 1 or d < 2:
        raise ValueError(f"need T >= 1, 0 <= eps < 1, d >= 2; got T={T}, eps={eps}, d={d}")
    return floor((1 << d) * (1 + eps) * T - 2 * (1 - eps) * T + 2)


@dataclass(frozen=True)
class GoodCaps:
    """Search budgets for :func:`verify_good`.

    ``max_dm`` bounds ``d * m`` (the prefix-tuple enumeration); ``max_subsets``
    bounds ``C(|class|, q + 1)`` per class and is only used by the literal
    subset enumeration.
    """

    max_dm: int = 24
    max_subsets: int = 10**7


@dataclass(frozen=True)
class GoodCheck:
    status: str  # "pass" | "violation" | "cap_exceeded"
    prefixes: tuple[BitString, ...] | None = None
    Z: tuple[PointKey, ...] | None = None
    reason: str = ""
    tuples_checked: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def __bool__(self) -> bool:
        return self.ok


def _prefix_tuples(d: int, m: int) -> Iterator[tuple[str, ...]]:
    """Nonempty prefixes for coordinates 2..d, shortest length tuples first."""
    length_tuples = sorted(product(range(1, m + 1), repeat=d - 1), key=lambda L: (sum(L), L))
    for lengths in length_tuples:
        yield from product(*(_strings(L) for L in lengths))


def verify_good(Y: BinaryAlmostNet | Iterable[PointKey], q: int, caps: GoodCaps = GoodCaps(),
                method: str = "interval") -> GoodCheck:
    """Exhaustively decide whether a key set is ``q``-good.

    Every tuple of nonempty prefixes ``(a^2, ..., a^d)`` is paired with every
    ``(q+1)``-subset ``Z`` of the keys agreeing with the parents of those
    prefixes. ``method="subsets"`` enumerates the subsets literally.
    ``method="interval"`` uses that only the smallest and largest first
    component of ``Z`` matter: with the class sorted by first component,
    the realizable (min, max) pairs are exactly the positions ``(j, j')`` with
    ``j' - j >= q``, and the tightest one for each ``j`` is ``j' = j + q``.
    """
    keys = _key_list(Y)
    if q < 0:
        raise ValueError("q must be nonnegative")
    if method not in ("interval", "subsets"):
        raise ValueError(f"unknown method {method!r}")
    if not keys:
        return GoodCheck("pass")
    d, m = len(keys[0]), len(keys[0][0])
    for i in range(d):
        seen: dict[str, PointKey] = {}
        for k in keys:
            if k[i] in seen:
                return GoodCheck("violation", Z=(seen[k[i]], k),
                                 reason=f"keys agree in coordinate {i + 1}")
            seen[k[i]] = k
    if d * m > caps.max_dm:
        return GoodCheck("cap_exceeded", reason=f"d*m = {d * m} exceeds {caps.max_dm}")
    if d == 1:
        return _verify_good_1d(keys, q, caps, method)

    checked = 0
    for pref in _prefix_tuples(d, m):
        checked += 1
        parents = tuple(a[:-1] for a in pref)
        cls = [k for k in keys if all(k[i + 1].startswith(parents[i]) for i in range(d - 1))]
        if len(cls) < q + 1:
            continue
        firsts = sorted(k[0] for k in keys if all(k[i + 1].startswith(pref[i]) for i in range(d - 1)))
        bad = _find_bad_subset(cls, firsts, q, caps, method)
        if bad == "cap":
            return GoodCheck("cap_exceeded", prefixes=pref, tuples_checked=checked,
                             reason=f"C({len(cls)}, {q + 1}) exceeds {caps.max_subsets}")
        if bad is not None:
            return GoodCheck("violation", prefixes=pref, Z=bad, tuples_checked=checked,
                             reason="no key with these prefixes lies strictly between min and max of Z")
    return GoodCheck("pass", tuples_checked=checked)


def _verify_good_1d(keys, q, caps, method):
    # no prefix conditions: one class, witnesses are all keys
    firsts = sorted(k[0] for k in keys)
    bad = _find_bad_subset(keys, firsts, q, caps, method)
    if bad == "cap":
        return GoodCheck("cap_exceeded", reason="subset budget")
    if bad is not None:
        return GoodCheck("violation", prefixes=(), Z=bad, tuples_checked=1)
    return GoodCheck("pass", tuples_checked=1)


def _has_between(firsts: list[str], lo: str, hi: str) -> bool:
    j = bisect_right(firsts, lo)
    return j < len(firsts) and firsts[j] < hi


def _find_bad_subset(cls, firsts, q, caps, method):
    if method == "subsets":
        if comb(len(cls), q + 1) > caps.max_subsets:
            return "cap"
        for Z in combinations(cls, q + 1):
            f = [z[0] for z in Z]
            if not _has_between(firsts, min(f), max(f)):
                return tuple(Z)
        return None
    ordered = sorted(cls, key=lambda k: k[0])
    for j in range(len(ordered) - q):
        lo, hi = ordered[j][0], ordered[j + q][0]
        if not _has_between(firsts, lo, hi):
            return tuple(ordered[j:j + q + 1])
    return None


def minimal_good_q(Y: BinaryAlmostNet | Iterable[PointKey], caps: GoodCaps = GoodCaps(),
                   q_max: int | None = None) -> int | None:
    """Smallest ``q >= 1`` for which the key set is ``q``-good.

    Returns None when a cap is hit first or no ``q <= q_max`` passes.
    """
    keys = _key_list(Y)
    q_max = len(keys) if q_max is None else q_max
    for q in range(1, q_max + 1):
        res = verify_good(keys, q, caps)
        if res.status == "cap_exceeded":
            return None
        if res.ok:
            return q
    return None


@dataclass(frozen=True)
class WitnessStep:
    """One coordinate of the descent: ``U_{i-1}`` is carved out of ``U_i``."""

    i: int
    b: str
    alpha: int
    c: str
    a: str
    size_before: int
    size_after: int
    subset: tuple[PointKey, ...]


def _lcp(strings: Sequence[str]) -> str:
    lo, hi = min(strings), max(strings)
    j = 0
    while j < len(lo) and lo[j] == hi[j]:
        j += 1
    return lo[:j]


def find_interior_witness(Y: BinaryAlmostNet | Iterable[PointKey], q: int, U: Iterable[PointKey],
                          tie_break: int | Callable[[int, int, int], int] = 0
                          ) -> tuple[PointKey, list[WitnessStep]]:
    """Find a key whose embedded point lies inside the hull of the embedded ``U``.

    Descends ``U_d = U`` through ``U_{d-1}, ..., U_1``: for coordinate ``i``
    take the longest common prefix ``b`` of the ``i``-th components, keep the
    majority side ``alpha`` of the next bit, extend by the longest common
    prefix ``c`` of what is kept, and set ``a^i = b alpha c (1 - alpha)``.
    A key ``y`` extending every ``a^i`` whose first component lies strictly
    between the extremes of ``U_1`` is returned together with the trace.

    ``tie_break`` picks ``alpha`` on a tie: a fixed bit, or a callable
    ``(i, zeros, ones) -> bit``.
    """
    keys = _key_list(Y)
    current = list(dict.fromkeys(U))
    if not current:
        raise ValueError("U is empty")
    d = len(current[0])
    if len(current) <= (1 << (d - 1)) * q:
        raise ValueError(f"|U| = {len(current)} must exceed 2^(d-1) q = {(1 << (d - 1)) * q}")
    trace: list[WitnessStep] = []
    prefixes: dict[int, str] = {}
    for i in range(d - 1, 0, -1):
        comp = [x[i] for x in current]
        b = _lcp(comp)
        L = len(b)
        if L >= len(comp[0]):
            raise RuntimeError(f"coordinate {i + 1} of U is not injective; descent failed")
        zeros = sum(1 for s in comp if s[L] == "0")
        ones = len(comp) - zeros
        if zeros != ones:
            alpha = 0 if zeros > ones else 1
        else:
            alpha = tie_break(i + 1, zeros, ones) if callable(tie_break) else int(tie_break)
        head = b + str(alpha)
        kept = [x for x in current if x[i].startswith(head)]
        c = _lcp([x[i] for x in kept])[len(head):]
        if len(head) + len(c) >= len(comp[0]):
            raise RuntimeError(f"descent at coordinate {i + 1} left a single key; |U| too small")
        a = head + c + str(1 - alpha)
        if 2 * len(kept) < len(current):
            raise AssertionError("majority side lost more than half of U")
        trace.append(WitnessStep(i + 1, b, alpha, c, a, len(current), len(kept), tuple(kept)))
        prefixes[i] = a
        current = kept
    if len(current) <= q:
        raise RuntimeError(f"|U_1| = {len(current)} <= q = {q}; caller passed too small a U")
    lo = min(x[0] for x in current)
    hi = max(x[0] for x in current)
    for y in sorted(keys):
        if lo < y[0] < hi and all(y[i].startswith(a) for i, a in prefixes.items()):
            return y, trace
    raise LookupError(f"no witness: the key set is not {q}-good for prefixes "
                      f"{tuple(prefixes[i] for i in sorted(prefixes))}")
