"""Segments Containing Points as a two-stream admission instance.

Coordinates are doubled so every point becomes a width-1 peak at an even
tick.  A unit peak at ``2p`` fits inside ``[2a, 2b)`` exactly when
``a <= p < b``, so the translation question is answered by whether the
minimal displacement lands before ``L1 - L2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..admission import AdmissionResult, min_displacement
from ..envelope import StreamEnvelope, normalize


@dataclass(frozen=True)
class SCPInstance:
    points: tuple[int, ...]
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pts = tuple(int(p) for p in self.points)
        ivs = tuple((int(a), int(b)) for a, b in self.intervals)
        if not pts or not ivs:
            raise ValueError("need at least one point and one interval")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("points must be strictly ascending")
        for k, (a, b) in enumerate(ivs):
            if a >= b:
                raise ValueError(f"interval {k} [{a},{b}) is empty")
            if k and a < ivs[k - 1][1]:
                raise ValueError(f"intervals {k - 1} and {k} overlap or are unsorted")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def build(cls, points: Sequence[int], intervals: Sequence[Sequence[int]]) -> "SCPInstance":
        """Sort and deduplicate raw input before validating."""
        return cls(tuple(sorted(set(points))), tuple(sorted(tuple(iv) for iv in intervals)))

    def contains(self, u: int) -> bool:
        return all(any(a <= p + u < b for a, b in self.intervals) for p in self.points)

    def to_json(self) -> dict:
        return {"points": list(self.points), "intervals": [list(iv) for iv in self.intervals]}


@dataclass(frozen=True)
class SCPReduction:
    committed: StreamEnvelope
    request: StreamEnvelope
    bandwidth: int
    threshold: int
    offset_base: int

    @property
    def possible(self) -> bool:
        """False when the point set is wider than the interval span."""
        return self.threshold >= 0

    def translation(self, displacement: int | None) -> int | None:
        """Map a 2-stream displacement back to a translation, or None."""
        if displacement is None or not self.possible or displacement >= self.threshold:
            return None
        return displacement // 2 + self.offset_base


def scp_brute(scp: SCPInstance) -> int | None:
    """Smallest ``u`` with ``P + u`` inside the union of intervals.

    Any valid translation can slide left until some point meets an interval
    start, so interval starts minus points are the only candidates.
    """
    for u in sorted({a - p for a, _ in scp.intervals for p in scp.points}):
        if scp.contains(u):
            return u
    return None


def scp_to_2ss(scp: SCPInstance) -> SCPReduction:
    s1 = scp.intervals[0][0]
    p1 = scp.points[0]
    # height 1 everywhere, then carve the intervals out at height 0
    committed = [(0, 2 * (a - s1), 2 * (b - s1)) for a, b in scp.intervals]
    committed += [(1, 2 * (b - s1), 2 * (a - s1)) for (_, b), (a, _) in zip(scp.intervals, scp.intervals[1:]) if a > b]
    request = [(1, 2 * (p - p1), 2 * (p - p1) + 1) for p in scp.points]
    c = normalize(committed)
    r = normalize(request)
    return SCPReduction(c, r, 1, c.length - r.length, s1 - p1)


def scp_via_2ss(scp: SCPInstance, algorithm: str = "morph") -> tuple[int | None, AdmissionResult, SCPReduction]:
    red = scp_to_2ss(scp)
    res = min_displacement(red.committed, red.request, red.bandwidth, algorithm)
    return red.translation(res.displacement), res, red
