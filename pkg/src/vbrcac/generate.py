"""Seeded random instances.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64), so a
given seed reproduces the same instance on any platform numpy supports.
"""
from __future__ import annotations

import numpy as np

from .envelope import StreamEnvelope, _compact
from .reductions.scp import SCPInstance
from .reductions.stringpack import StringPackInstance


def random_envelope(
    rng: np.random.Generator,
    peaks: int,
    max_height: int,
    max_len: int,
    min_height: int = 0,
) -> StreamEnvelope:
    """At most ``peaks`` segments (fewer after merging equal neighbours)."""
    if peaks < 1 or max_len < 1 or max_height < min_height:
        raise ValueError("peaks and max_len must be positive, max_height >= min_height")
    lengths = rng.integers(1, max_len + 1, size=peaks)
    heights = rng.integers(min_height, max_height + 1, size=peaks)
    ends = np.cumsum(lengths)
    starts = ends - lengths
    return _compact(heights.astype(np.int64), starts.astype(np.int64), ends.astype(np.int64))


def random_2ss(rng: np.random.Generator, max_peaks: int, bandwidth: int, max_len: int = 10):
    """A random admission instance; every peak fits the channel on its own."""
    n = int(rng.integers(1, max_peaks + 1))
    m = int(rng.integers(1, max_peaks + 1))
    s1 = random_envelope(rng, n, bandwidth, max_len)
    s2 = random_envelope(rng, m, bandwidth, max_len)
    return s1, s2


def random_scp(rng: np.random.Generator, max_points: int = 8, max_intervals: int = 8, span: int = 30) -> SCPInstance:
    n = int(rng.integers(1, max_points + 1))
    m = int(rng.integers(1, max_intervals + 1))
    cuts = np.sort(rng.choice(span + 1, size=min(2 * m, span + 1), replace=False))
    ivs = [(int(a), int(b)) for a, b in zip(cuts[0::2], cuts[1::2])]
    pts = rng.choice(span + 1, size=min(n, span + 1), replace=False)
    return SCPInstance.build(pts.tolist(), ivs)


def random_stringpack(rng: np.random.Generator, m: int, n: int, density: float = 0.5) -> StringPackInstance:
    bits = rng.random((m, n)) < density
    return StringPackInstance(tuple("".join("1" if b else "0" for b in row) for row in bits))
