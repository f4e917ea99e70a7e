"""Minimal displacement of a requested stream against committed traffic.

Three independent solvers share one result type:

* :func:`min_displacement_naive` enumerates all peak pairs;
* :func:`min_displacement_morph` sorts peaks by height and only visits the
  pairs whose heights overflow the channel;
* :func:`min_displacement_oracle` never builds intervals at all, it tests
  candidate displacements by pointwise evaluation.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .envelope import Peak, StreamEnvelope, shift, sum_envelopes


@dataclass(frozen=True)
class ForbiddenInterval:
    """Open set of displacements ``(lo, hi)`` at which two peaks overflow."""

    lo: int
    hi: int

    def __contains__(self, t) -> bool:
        return self.lo < t < self.hi


@dataclass(frozen=True)
class AdmissionResult:
    displacement: int | None
    pair_count: int = 0
    intervals_merged: int = 0
    aggregate_end: int | None = None
    algorithm: str = ""
    reason: str = field(default="", compare=False)

    @property
    def feasible(self) -> bool:
        return self.displacement is not None

    def to_json(self) -> dict:
        out = {
            "displacement": self.displacement,
            "pair_count": self.pair_count,
            "intervals_merged": self.intervals_merged,
            "feasible": self.feasible,
        }
        if self.reason:
            out["reason"] = self.reason
        return out


def forbidden_interval(p1: Peak, p2: Peak, bandwidth: int) -> ForbiddenInterval | None:
    """Displacements of ``p2`` that overlap ``p1`` with combined height above ``bandwidth``.

    Returns None when the heights fit or when only negative displacements
    are forbidden.

    >>> forbidden_interval(Peak(4, 6, 8), Peak(2, 0, 2), 5)
    ForbiddenInterval(lo=4, hi=8)
    """
    if p1.height + p2.height <= bandwidth:
        return None
    hi = p1.end - p2.start
    if hi <= 0:
        return None
    return ForbiddenInterval(p1.start - p2.end, hi)


def forbidden_intervals(s1: StreamEnvelope, s2: StreamEnvelope, bandwidth: int) -> list[ForbiddenInterval]:
    """All forbidden intervals with ``hi > 0``, sorted by ``(lo, hi)``."""
    lo, hi, _ = _kernels.naive_pairs(s1.heights, s1.starts, s1.ends, s2.heights, s2.starts, s2.ends, bandwidth)
    order = np.lexsort((hi, lo))
    return [ForbiddenInterval(int(a), int(b)) for a, b in zip(lo[order], hi[order])]


def feasible(s1: StreamEnvelope, s2: StreamEnvelope, displacement: int, bandwidth: int) -> bool:
    """True iff ``s1 + shift(s2, displacement)`` never exceeds ``bandwidth``."""
    if displacement < 0:
        raise ValueError(f"negative displacement {displacement}")
    peak = _kernels.overlay_max(s1.heights, s1.starts, s1.ends, s2.heights, s2.starts, s2.ends, int(displacement))
    return peak <= bandwidth


def feasible_reference(s1: StreamEnvelope, s2: StreamEnvelope, displacement: int, bandwidth: int) -> bool:
    """Same as :func:`feasible`, spelled out with envelope arithmetic."""
    return sum_envelopes(s1, shift(s2, displacement)).max_height <= bandwidth


def _infeasibility(s1, s2, bandwidth, algorithm) -> AdmissionResult | None:
    if s2.max_height > bandwidth:
        return AdmissionResult(None, algorithm=algorithm, reason="a requested peak exceeds the channel bandwidth")
    if s1.max_height > bandwidth:
        return AdmissionResult(None, algorithm=algorithm, reason="committed traffic already exceeds the channel bandwidth")
    return None


def _sweep(lo, hi, total, algorithm) -> AdmissionResult:
    order = np.lexsort((hi, lo))
    end, merged = _kernels.first_gap(lo[order], hi[order])
    return AdmissionResult(int(end), int(total), int(merged), int(end), algorithm)


def min_displacement_naive(s1: StreamEnvelope, s2: StreamEnvelope, bandwidth: int) -> AdmissionResult:
    """Enumerate all ``n*m`` peak pairs, sort the forbidden intervals, take the first gap."""
    bad = _infeasibility(s1, s2, bandwidth, "naive")
    if bad:
        return bad
    lo, hi, total = _kernels.naive_pairs(s1.heights, s1.starts, s1.ends, s2.heights, s2.starts, s2.ends, bandwidth)
    return _sweep(lo, hi, total, "naive")


def _by_height(env: StreamEnvelope):
    order = np.argsort(-env.heights, kind="stable")
    return env.heights[order], env.starts[order], env.ends[order]


def min_displacement_morph(s1: StreamEnvelope, s2: StreamEnvelope, bandwidth: int) -> AdmissionResult:
    """Height-sorted variant: touches only the ``P`` overflowing pairs.

    Cost is ``O((P + n) log n)``: two height sorts, ``P`` interval
    computations, one sort of the intervals and a linear merge.
    """
    bad = _infeasibility(s1, s2, bandwidth, "morph")
    if bad:
        return bad
    h1, a1, b1 = _by_height(s1)
    h2, a2, b2 = _by_height(s2)
    lo, hi, total = _kernels.morph_pairs(h1, a1, b1, h2, a2, b2, bandwidth)
    return _sweep(lo, hi, total, "morph")


def _candidates(s1: StreamEnvelope, s2: StreamEnvelope):
    """Yield 0 then every ``e1_i - s2_j >= 0`` in ascending order, lazily."""
    yield 0
    ends = s1.ends
    starts = s2.starts  # ascending
    # row i walks j downward so e1_i - s2_j ascends
    heap = []
    for i, e in enumerate(ends.tolist()):
        j = int(np.searchsorted(starts, e, side="right")) - 1
        if j >= 0:
            heap.append((e - int(starts[j]), i, j))
    heapq.heapify(heap)
    last = 0
    while heap:
        t, i, j = heapq.heappop(heap)
        if j > 0:
            heapq.heappush(heap, (int(ends[i]) - int(starts[j - 1]), i, j - 1))
        if t > last:
            last = t
            yield t


def min_displacement_oracle(s1: StreamEnvelope, s2: StreamEnvelope, bandwidth: int) -> AdmissionResult:
    """Test 0 and every right endpoint ``e1_i - s2_j`` by direct evaluation.

    Pair count is tallied by an exhaustive double loop so it can be compared
    with the morphology-sensitive instrumentation.
    """
    if len(s1) * len(s2) <= 4_000_000:
        pairs = int(np.count_nonzero(np.add.outer(s1.heights, s2.heights) > bandwidth))
    else:
        ranked = np.sort(s2.heights)
        pairs = int((len(ranked) - np.searchsorted(ranked, bandwidth - s1.heights, side="right")).sum())
    for t in _candidates(s1, s2):
        if feasible(s1, s2, t, bandwidth):
            return AdmissionResult(t, pairs, 0, t, "oracle")
    why = _infeasibility(s1, s2, bandwidth, "oracle")
    return AdmissionResult(None, pairs, algorithm="oracle",
                           reason=why.reason if why else "no candidate displacement is feasible")


ALGORITHMS = {
    "naive": min_displacement_naive,
    "morph": min_displacement_morph,
    "oracle": min_displacement_oracle,
}


def min_displacement(s1: StreamEnvelope, s2: StreamEnvelope, bandwidth: int, algorithm: str = "morph") -> AdmissionResult:
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {sorted(ALGORITHMS)}") from None
    return fn(s1, s2, bandwidth)
