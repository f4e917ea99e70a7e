"""Hot loops of the admission algorithms.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy version
with identical outputs.  The numba path is used when numba imports cleanly and
``VBRCAC_DISABLE_NUMBA`` is not set to a truthy value.  Both implementations
stay importable (``numba_impl`` / ``numpy_impl``) so tests and the backend
benchmark can compare them directly.

All arrays are int64.  Forbidden intervals are open ``(lo, hi)``; kernels drop
intervals with ``hi <= 0`` but still count them in the pair total.
"""
from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

_EMPTY = np.zeros(0, dtype=np.int64)
# upper bound on cells in one broadcast block of the numpy naive kernel
_NAIVE_BLOCK_CELLS = 1 << 22


def _env_disabled() -> bool:
    return os.environ.get("VBRCAC_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None


# ---------------------------------------------------------------------------
# numpy implementations


def _naive_pairs_np(h1, s1, e1, h2, s2, e2, bandwidth):
    n, m = len(h1), len(h2)
    if n == 0 or m == 0:
        return _EMPTY, _EMPTY, 0
    rows = max(1, _NAIVE_BLOCK_CELLS // m)
    los, his = [], []
    total = 0
    for a in range(0, n, rows):
        b = min(n, a + rows)
        conflict = (h1[a:b, None] + h2[None, :]) > bandwidth
        total += int(np.count_nonzero(conflict))
        ii, jj = np.nonzero(conflict)
        if ii.size == 0:
            continue
        ii += a
        hi = e1[ii] - s2[jj]
        keep = hi > 0
        los.append(s1[ii[keep]] - e2[jj[keep]])
        his.append(hi[keep])
    if not los:
        return _EMPTY, _EMPTY, total
    return np.concatenate(los), np.concatenate(his), total


def _morph_pairs_np(h1, s1, e1, h2, s2, e2, bandwidth):
    # inputs sorted by height, descending
    n, m = len(h1), len(h2)
    if n == 0 or m == 0:
        return _EMPTY, _EMPTY, 0
    # conflicting partners of row i form a prefix of the s2 order
    counts = np.searchsorted(-h2, h1 - bandwidth, side="left")
    stop = int(np.searchsorted(-counts, 0, side="left"))
    counts = counts[:stop]
    total = int(counts.sum())
    if total == 0:
        return _EMPTY, _EMPTY, 0
    ii = np.repeat(np.arange(stop, dtype=np.int64), counts)
    offsets = np.cumsum(counts) - counts
    jj = np.arange(total, dtype=np.int64) - np.repeat(offsets, counts)
    hi = e1[ii] - s2[jj]
    keep = hi > 0
    return s1[ii[keep]] - e2[jj[keep]], hi[keep], total


def _first_gap_np(lo, hi):
    # lo ascending, every hi > 0
    k = len(lo)
    if k == 0:
        return 0, 0
    reach = np.maximum.accumulate(hi)
    before = np.empty(k, dtype=np.int64)
    before[0] = 0
    before[1:] = reach[:-1]
    gaps = np.flatnonzero(lo >= before)
    if gaps.size == 0:
        return int(reach[-1]), k
    g = int(gaps[0])
    return int(before[g]), g


def _overlay_max_np(h1, s1, e1, h2, s2, e2, shift):
    if len(h1) == 0 and len(h2) == 0:
        return 0
    cuts = np.unique(np.concatenate((s1, e1, s2 + shift, e2 + shift)))
    t = cuts[:-1] if len(cuts) > 1 else cuts
    load = np.zeros(len(t), dtype=np.int64)
    for h, s, e in ((h1, s1, e1), (h2, s2 + shift, e2 + shift)):
        if len(h) == 0:
            continue
        idx = np.searchsorted(s, t, side="right") - 1
        inside = (idx >= 0) & (t < e[-1])
        load[inside] += h[idx[inside]]
    return int(load.max()) if len(load) else 0


numpy_impl = SimpleNamespace(
    naive_pairs=_naive_pairs_np,
    morph_pairs=_morph_pairs_np,
    first_gap=_first_gap_np,
    overlay_max=_overlay_max_np,
)


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _naive_pairs_nb(h1, s1, e1, h2, s2, e2, bandwidth):
        n, m = len(h1), len(h2)
        total = 0
        kept = 0
        for i in range(n):
            for j in range(m):
                if h1[i] + h2[j] > bandwidth:
                    total += 1
                    if e1[i] - s2[j] > 0:
                        kept += 1
        lo = np.empty(kept, dtype=np.int64)
        hi = np.empty(kept, dtype=np.int64)
        if kept == 0:
            return lo, hi, total
        k = 0
        for i in range(n):
            for j in range(m):
                if h1[i] + h2[j] > bandwidth:
                    right = e1[i] - s2[j]
                    if right > 0:
                        lo[k] = s1[i] - e2[j]
                        hi[k] = right
                        k += 1
        return lo, hi, total

    @njit(cache=True)
    def _morph_pairs_nb(h1, s1, e1, h2, s2, e2, bandwidth):
        n, m = len(h1), len(h2)
        counts = np.zeros(n, dtype=np.int64)
        stop = 0
        total = 0
        if m > 0:
            top = h2[0]
            for i in range(n):
                if h1[i] + top <= bandwidth:
                    break
                c = 0
                while c < m and h1[i] + h2[c] > bandwidth:
                    c += 1
                counts[i] = c
                total += c
                stop = i + 1
        lo = np.empty(total, dtype=np.int64)
        hi = np.empty(total, dtype=np.int64)
        k = 0
        for i in range(stop):
            for j in range(counts[i]):
                right = e1[i] - s2[j]
                if right > 0:
                    lo[k] = s1[i] - e2[j]
                    hi[k] = right
                    k += 1
        return lo[:k], hi[:k], total

    @njit(cache=True)
    def _first_gap_nb(lo, hi):
        end = 0
        merged = 0
        for k in range(len(lo)):
            if lo[k] >= end:
                return end, merged
            if hi[k] > end:
                end = hi[k]
            merged += 1
        return end, merged

    @njit(cache=True)
    def _overlay_max_nb(h1, s1, e1, h2, s2, e2, shift):
        # two-pointer walk; both envelopes are gap-free from 0
        n, m = len(h1), len(h2)
        big = np.iinfo(np.int64).max
        t = 0
        i = 0
        j = 0
        best = 0
        while True:
            a = h1[i] if i < n else 0
            b = h2[j] if (j < m and t >= shift) else 0
            if a + b > best:
                best = a + b
            n1 = e1[i] if i < n else big
            if j < m:
                n2 = shift if t < shift else e2[j] + shift
            else:
                n2 = big
            t = min(n1, n2)
            if t == big:
                break
            if i < n and e1[i] == t:
                i += 1
            if j < m and e2[j] + shift == t:
                j += 1
        return best

    numba_impl = SimpleNamespace(
        naive_pairs=_naive_pairs_nb,
        morph_pairs=_morph_pairs_nb,
        first_gap=_first_gap_nb,
        overlay_max=_overlay_max_nb,
    )
else:  # pragma: no cover
    numba_impl = None


USE_NUMBA = HAVE_NUMBA and not _env_disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"
_impl = numba_impl if USE_NUMBA else numpy_impl

naive_pairs = _impl.naive_pairs
morph_pairs = _impl.morph_pairs
first_gap = _impl.first_gap
overlay_max = _impl.overlay_max
