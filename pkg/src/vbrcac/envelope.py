"""Piecewise-constant traffic envelopes over integer time.

An envelope is a gap-free sequence of half-open segments ``[start, end)``
starting at tick 0, each carrying an integer bandwidth ``height``.  Adjacent
segments never share a height.  Envelopes are immutable; every operation
returns a new one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class Peak(NamedTuple):
    height: int
    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class Channel:
    bandwidth: int

    def __post_init__(self):
        if int(self.bandwidth) != self.bandwidth or self.bandwidth <= 0:
            raise ValueError(f"bandwidth must be a positive integer, got {self.bandwidth!r}")


@dataclass(frozen=True)
class Violation:
    index: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"peak {self.index}: {self.message}"


class OverlapError(ValueError):
    """Raw peaks passed to :func:`normalize` overlap in time."""

    def __init__(self, first: int, second: int, a: Peak, b: Peak):
        super().__init__(f"overlap between peaks {first} and {second}: {tuple(a)} and {tuple(b)}")
        self.pair = (first, second)


class InvalidEnvelopeError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


def _as_peak(p) -> Peak:
    h, s, e = p
    for v in (h, s, e):
        if isinstance(v, bool) or int(v) != v:
            raise ValueError(f"peak {tuple(p)!r} has a non-integer field")
    return Peak(int(h), int(s), int(e))


def validate(peaks: "StreamEnvelope | Iterable") -> list[Violation]:
    """Return every invariant violation of a peak sequence (empty list = ok)."""
    if isinstance(peaks, StreamEnvelope):
        peaks = peaks.peaks
    out: list[Violation] = []
    prev: Peak | None = None
    for i, raw in enumerate(peaks):
        p = _as_peak(raw)
        if p.start >= p.end:
            out.append(Violation(i, "length", f"non-positive length [{p.start},{p.end})"))
        if p.height < 0:
            out.append(Violation(i, "height", f"negative height {p.height}"))
        if prev is None:
            if p.start != 0:
                out.append(Violation(i, "origin", f"first peak starts at {p.start}, not 0"))
        else:
            if p.start > prev.end:
                out.append(Violation(i, "gap", f"gap at [{prev.end},{p.start})"))
            elif p.start < prev.end:
                out.append(Violation(i, "overlap", f"overlaps previous peak on [{p.start},{prev.end})"))
            if p.height == prev.height:
                out.append(Violation(i, "merge", "adjacent equal heights"))
        prev = p
    return out


class StreamEnvelope:
    """A validated envelope.  Construct with :func:`normalize` for raw input."""

    __slots__ = ("heights", "starts", "ends")

    def __init__(self, peaks: Iterable = ()):
        peaks = [_as_peak(p) for p in peaks]
        bad = validate(peaks)
        if bad:
            raise InvalidEnvelopeError(bad)
        arr = np.array(peaks, dtype=np.int64).reshape(-1, 3)
        self._set(arr[:, 0], arr[:, 1], arr[:, 2])

    def _set(self, heights, starts, ends):
        for name, a in (("heights", heights), ("starts", starts), ("ends", ends)):
            a = np.ascontiguousarray(a, dtype=np.int64)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @classmethod
    def _trusted(cls, heights, starts, ends) -> "StreamEnvelope":
        env = cls.__new__(cls)
        env._set(heights, starts, ends)
        return env

    def __setattr__(self, name, value):
        raise AttributeError("StreamEnvelope is immutable")

    @property
    def peaks(self) -> tuple[Peak, ...]:
        return tuple(Peak(int(h), int(s), int(e)) for h, s, e in zip(self.heights, self.starts, self.ends))

    @property
    def length(self) -> int:
        return int(self.ends[-1]) if len(self.ends) else 0

    @property
    def max_height(self) -> int:
        return int(self.heights.max()) if len(self.heights) else 0

    @property
    def area(self) -> int:
        return int(np.dot(self.heights, self.ends - self.starts))

    def __len__(self) -> int:
        return len(self.heights)

    def __iter__(self):
        return iter(self.peaks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StreamEnvelope):
            return NotImplemented
        return (
            np.array_equal(self.heights, other.heights)
            and np.array_equal(self.starts, other.starts)
            and np.array_equal(self.ends, other.ends)
        )

    def __hash__(self) -> int:
        return hash((self.heights.tobytes(), self.ends.tobytes()))

    def __repr__(self) -> str:
        body = ", ".join(f"({p.height},{p.start},{p.end})" for p in self.peaks[:8])
        if len(self) > 8:
            body += f", ... {len(self) - 8} more"
        return f"StreamEnvelope([{body}])"

    def to_list(self) -> list[list[int]]:
        return [list(p) for p in self.peaks]


def _compact(heights: np.ndarray, starts: np.ndarray, ends: np.ndarray) -> StreamEnvelope:
    """Merge runs of equal height in an already contiguous segment list."""
    if len(heights) == 0:
        return StreamEnvelope._trusted(heights, starts, ends)
    keep = np.ones(len(heights), dtype=bool)
    keep[1:] = heights[1:] != heights[:-1]
    first = np.flatnonzero(keep)
    new_ends = np.append(starts[first[1:]], ends[-1])
    return StreamEnvelope._trusted(heights[first], starts[first], new_ends)


def normalize(raw: Iterable) -> StreamEnvelope:
    """Build an envelope from raw peaks: fill gaps with height 0, merge equal neighbours.

    >>> normalize([(3, 0, 10), (1, 12, 20)]).to_list()
    [[3, 0, 10], [0, 10, 12], [1, 12, 20]]
    """
    peaks = [_as_peak(p) for p in raw]
    for i, p in enumerate(peaks):
        if p.start >= p.end:
            raise ValueError(f"peak {i} {tuple(p)} has non-positive length")
        if p.height < 0 or p.start < 0:
            raise ValueError(f"peak {i} {tuple(p)} has a negative field")
    order = sorted(range(len(peaks)), key=lambda i: peaks[i].start)
    h, s, e = [], [], []
    cursor = 0
    prev = None
    for i in order:
        p = peaks[i]
        if prev is not None and p.start < peaks[prev].end:
            a, b = sorted((prev, i))
            raise OverlapError(a, b, peaks[a], peaks[b])
        if p.start > cursor:
            h.append(0), s.append(cursor), e.append(p.start)
        h.append(p.height), s.append(p.start), e.append(p.end)
        cursor = p.end
        prev = i
    as_arr = lambda x: np.array(x, dtype=np.int64)
    return _compact(as_arr(h), as_arr(s), as_arr(e))


def shift(env: StreamEnvelope, delay: int) -> StreamEnvelope:
    """Delay ``env`` by ``delay`` ticks, padding the front with a height-0 segment."""
    if delay < 0:
        raise ValueError(f"negative displacement {delay}")
    delay = int(delay)
    if delay == 0 or len(env) == 0:
        if len(env) == 0 and delay > 0:
            return StreamEnvelope([(0, 0, delay)])
        return env
    h = np.concatenate(([0], env.heights))
    s = np.concatenate(([0], env.starts + delay))
    e = np.concatenate(([delay], env.ends + delay))
    return _compact(h, s, e)


def heights_at(env: StreamEnvelope, ts) -> np.ndarray:
    """Vectorised :func:`height_at`."""
    ts = np.asarray(ts, dtype=np.int64)
    out = np.zeros(ts.shape, dtype=np.int64)
    if len(env) == 0:
        return out
    idx = np.searchsorted(env.starts, ts, side="right") - 1
    inside = (ts >= 0) & (ts < env.length)
    out[inside] = env.heights[idx[inside]]
    return out


def height_at(env: StreamEnvelope, t: int) -> int:
    return int(heights_at(env, [t])[0])


def sum_envelopes(*envs: StreamEnvelope) -> StreamEnvelope:
    """Pointwise sum; shorter envelopes count as height 0 past their end."""
    envs = [e for e in envs if len(e)]
    if not envs:
        return StreamEnvelope()
    if len(envs) == 1:
        return envs[0]
    cuts = np.unique(np.concatenate([e.starts for e in envs] + [e.ends for e in envs]))
    starts = cuts[:-1]
    heights = np.zeros(len(starts), dtype=np.int64)
    for e in envs:
        heights += heights_at(e, starts)
    return _compact(heights, starts, cuts[1:])


def envelope_from_bits(bits: str | Sequence[int]) -> StreamEnvelope:
    """Unit-tick envelope with height 1 on every '1' and 0 on every '0'."""
    vals = [int(c) for c in bits]
    return normalize((v, t, t + 1) for t, v in enumerate(vals))
