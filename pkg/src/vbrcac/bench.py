"""Timing harness for the admission solvers."""
from __future__ import annotations

import csv
import json
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .admission import ALGORITHMS
from .envelope import StreamEnvelope
from .generate import random_envelope

REGIMES = ("low", "adversarial", "mixed")
CSV_COLUMNS = ("n", "m", "P", "algo", "displacement", "micros")


class BenchMismatch(RuntimeError):
    def __init__(self, message: str, instance: dict):
        super().__init__(message)
        self.instance = instance


@dataclass
class BenchRow:
    size: int
    n: int
    m: int
    pairs: int
    displacement: int | None
    micros: dict[str, float] = field(default_factory=dict)
    reported: dict[str, int] = field(default_factory=dict)  # pair_count per algorithm


@dataclass
class BenchReport:
    rows: list[BenchRow]
    algorithms: tuple[str, ...]

    def medians(self) -> dict[tuple[int, str], float]:
        out = {}
        for n in sorted({r.size for r in self.rows}):
            for a in self.algorithms:
                out[(n, a)] = statistics.median(r.micros[a] for r in self.rows if r.size == n)
        return out

    def write_csv(self, fh) -> None:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            for a in self.algorithms:
                w.writerow([r.n, r.m, r.pairs, a, "" if r.displacement is None else r.displacement, f"{r.micros[a]:.1f}"])

    def summary(self) -> str:
        lines = ["size\t" + "\t".join(f"{a}_us" for a in self.algorithms) + "\tmedian_P"]
        med = self.medians()
        for n in sorted({r.size for r in self.rows}):
            ps = statistics.median(r.pairs for r in self.rows if r.size == n)
            lines.append(f"{n}\t" + "\t".join(f"{med[(n, a)]:.1f}" for a in self.algorithms) + f"\t{ps:g}")
        return "\n".join(lines)


def regime_instance(rng: np.random.Generator, size: int, regime: str, bandwidth: int, max_len: int = 8):
    half = bandwidth // 2
    if regime == "low":
        lo, hi = 0, half
    elif regime == "adversarial":
        lo, hi = half + 1, bandwidth
    elif regime == "mixed":
        lo, hi = 0, bandwidth
    else:
        raise ValueError(f"unknown regime {regime!r}; choose from {REGIMES}")
    s1 = random_envelope(rng, size, hi, max_len, lo)
    s2 = random_envelope(rng, size, hi, max_len, lo)
    return s1, s2


def count_conflicts(s1: StreamEnvelope, s2: StreamEnvelope, bandwidth: int) -> int:
    """|{(i, j): h1_i + h2_j > B}|.

    Exhaustive blocked comparison up to 16M pairs, rank counting beyond.
    """
    if len(s1) * len(s2) > 16_000_000:
        ranked = np.sort(s2.heights)
        return int((len(ranked) - np.searchsorted(ranked, bandwidth - s1.heights, side="right")).sum())
    total = 0
    step = max(1, 4_000_000 // max(1, len(s2)))
    for a in range(0, len(s1), step):
        total += int(np.count_nonzero(s1.heights[a:a + step, None] + s2.heights[None, :] > bandwidth))
    return total


def _instance_json(s1: StreamEnvelope, s2: StreamEnvelope, bandwidth: int) -> dict:
    return {"bandwidth": bandwidth, "streams": [{"id": "committed", "peaks": s1.to_list()},
                                                {"id": "request", "peaks": s2.to_list()}]}


def run_bench(
    sizes: Sequence[int],
    trials: int = 3,
    seed: int = 0,
    regime: str = "mixed",
    bandwidth: int = 20,
    algorithms: Sequence[str] = ("naive", "morph", "oracle"),
) -> BenchReport:
    """Time every algorithm on ``len(sizes) * trials`` seeded instances.

    Displacements must agree across algorithms, and the reported pair count
    must match an exhaustive count, before a row is recorded.
    """
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    rng = np.random.default_rng(seed)
    rows = []
    # one throwaway call per algorithm so JIT compilation stays out of the timings
    w1, w2 = regime_instance(np.random.default_rng(0), 4, "mixed", bandwidth)
    for a in algorithms:
        ALGORITHMS[a](w1, w2, bandwidth)
    for size in sizes:
        for _ in range(trials):
            s1, s2 = regime_instance(rng, size, regime, bandwidth)
            micros, results = {}, {}
            for a in algorithms:
                t0 = time.perf_counter()
                results[a] = ALGORITHMS[a](s1, s2, bandwidth)
                micros[a] = (time.perf_counter() - t0) * 1e6
            disps = {a: r.displacement for a, r in results.items()}
            if len(set(disps.values())) != 1:
                raise BenchMismatch(f"displacements disagree: {disps}", _instance_json(s1, s2, bandwidth))
            pairs = count_conflicts(s1, s2, bandwidth)
            if "morph" in results and results["morph"].pair_count != pairs:
                raise BenchMismatch(f"morph counted {results['morph'].pair_count} pairs, exhaustive count {pairs}",
                                    _instance_json(s1, s2, bandwidth))
            reported = {a: r.pair_count for a, r in results.items()}
            rows.append(BenchRow(size, len(s1), len(s2), pairs, next(iter(disps.values())), micros, reported))
    return BenchReport(rows, tuple(algorithms))


def write_mismatch(path, exc: BenchMismatch) -> Path:
    p = Path(path)
    p.write_text(json.dumps(exc.instance) + "\n")
    return p
