"""Scheduling several streams over one channel.

``greedy_sequential`` admits streams one by one with the 2-stream solver.
``exact_small`` is a branch-and-bound search for desk-scale instances.

Candidate displacements for the exact search.  Take any optimal schedule
that is lexicographically smallest.  Call a stream *rooted* if it sits at 0
or one of its peaks starts exactly where a peak of an already rooted stream
ends.  If some set C of streams were not rooted, shifting all of C one tick
to the left stays feasible: an overflow at tick t would need an outside peak
ending at t+1 and a C peak starting at t+1, which would root that C stream.
The shifted schedule is no worse and lexicographically smaller, so every
stream is rooted.  Hence placing streams one at a time (in every order) with
displacements drawn from ``{0} U {d_o + end_o - start_c}`` over already
placed streams ``o`` reaches the optimum.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .admission import min_displacement_morph
from .envelope import StreamEnvelope, shift, sum_envelopes

OBJECTIVES = ("makespan", "last_displacement")
DEFAULT_BUDGET = 10**6
# dense load arrays longer than this are refused by exact_small
MAX_HORIZON = 5_000_000


class InfeasibleStreamError(ValueError):
    def __init__(self, index: int, stream_id, height: int, bandwidth: int):
        super().__init__(f"stream {stream_id!r} has a peak of height {height} above bandwidth {bandwidth}")
        self.index = index
        self.stream_id = stream_id


@dataclass(frozen=True)
class MultiInstance:
    streams: tuple[StreamEnvelope, ...]
    bandwidth: int
    ids: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.streams:
            raise ValueError("a multi-stream instance needs at least one stream")
        object.__setattr__(self, "streams", tuple(self.streams))
        ids = tuple(self.ids) or tuple(str(i) for i in range(len(self.streams)))
        if len(ids) != len(self.streams):
            raise ValueError("ids and streams differ in length")
        object.__setattr__(self, "ids", ids)

    def __len__(self) -> int:
        return len(self.streams)


@dataclass(frozen=True)
class MultiScheduleResult:
    displacements: tuple[int, ...]
    makespan: int
    last_displacement: int
    optimal: bool = False
    nodes: int = field(default=0, compare=False)

    @classmethod
    def from_displacements(cls, inst: MultiInstance, displacements: Sequence[int], optimal=False, nodes=0):
        d = tuple(int(x) for x in displacements)
        makespan = max(x + s.length for x, s in zip(d, inst.streams))
        return cls(d, makespan, max(d), optimal, nodes)

    def objective(self, name: str) -> int:
        if name not in OBJECTIVES:
            raise ValueError(f"unknown objective {name!r}")
        return getattr(self, name)

    def to_json(self) -> dict:
        return {
            "displacements": list(self.displacements),
            "makespan": self.makespan,
            "last_displacement": self.last_displacement,
            "optimal": self.optimal,
        }


@dataclass(frozen=True)
class ScheduleViolation:
    kind: str
    message: str
    stream: int | None = None
    time: int | None = None

    def __str__(self) -> str:
        return self.message


def _check_streams(inst: MultiInstance):
    for i, s in enumerate(inst.streams):
        if s.max_height > inst.bandwidth:
            raise InfeasibleStreamError(i, inst.ids[i], s.max_height, inst.bandwidth)


def default_order(inst: MultiInstance) -> list[int]:
    """Descending total area, ties by index."""
    return sorted(range(len(inst)), key=lambda i: (-inst.streams[i].area, i))


def greedy_sequential(inst: MultiInstance, order: Sequence[int] | None = None) -> MultiScheduleResult:
    """Place streams in ``order``, each at its minimal displacement against those already placed."""
    _check_streams(inst)
    order = default_order(inst) if order is None else list(order)
    if sorted(order) != list(range(len(inst))):
        raise ValueError(f"order {order} is not a permutation of 0..{len(inst) - 1}")
    committed = StreamEnvelope()
    disp = [0] * len(inst)
    for i in order:
        res = min_displacement_morph(committed, inst.streams[i], inst.bandwidth)
        disp[i] = res.displacement
        committed = sum_envelopes(committed, shift(inst.streams[i], res.displacement))
    return MultiScheduleResult.from_displacements(inst, disp)


def verify_schedule(inst: MultiInstance, result: MultiScheduleResult) -> list[ScheduleViolation]:
    """Check a schedule in time linear in the total peak count.  Empty list means valid."""
    out: list[ScheduleViolation] = []
    d = list(result.displacements)
    if len(d) != len(inst):
        return [ScheduleViolation("shape", f"{len(d)} displacements for {len(inst)} streams")]
    for i, x in enumerate(d):
        if x < 0:
            out.append(ScheduleViolation("negative", f"stream {inst.ids[i]} has negative displacement {x}", i))
    if out:
        return out
    # event sweep: +h at shifted start, -h at shifted end
    times = np.concatenate([s.starts + x for s, x in zip(inst.streams, d)] + [s.ends + x for s, x in zip(inst.streams, d)])
    deltas = np.concatenate([s.heights for s in inst.streams] + [-s.heights for s in inst.streams])
    order = np.argsort(times, kind="stable")
    times, deltas = times[order], deltas[order]
    cut = np.flatnonzero(np.diff(times)) if len(times) else np.zeros(0, dtype=int)
    load = np.cumsum(deltas)
    # load after all events at a time point
    settled = np.append(load[cut], load[-1]) if len(load) else load
    at = np.append(times[cut], times[-1]) if len(times) else times
    over = np.flatnonzero(settled > inst.bandwidth)
    if over.size:
        k = int(over[0])
        out.append(ScheduleViolation(
            "overflow", f"load {int(settled[k])} exceeds bandwidth {inst.bandwidth} at t={int(at[k])}", time=int(at[k])))
    expect = MultiScheduleResult.from_displacements(inst, d)
    if (result.makespan, result.last_displacement) != (expect.makespan, expect.last_displacement):
        out.append(ScheduleViolation(
            "objective", f"reported makespan/last displacement {result.makespan}/{result.last_displacement}, "
                         f"actual {expect.makespan}/{expect.last_displacement}"))
    return out


class _Search:
    def __init__(self, inst: MultiInstance, objective: str, budget: int, incumbent: MultiScheduleResult):
        self.inst = inst
        self.objective = objective
        self.budget = budget
        self.m = len(inst)
        self.B = inst.bandwidth
        self.lengths = [s.length for s in inst.streams]
        self.dense = [np.repeat(s.heights, s.ends - s.starts) for s in inst.streams]
        self.starts = [np.unique(s.starts) for s in inst.streams]
        self.ends = [np.unique(s.ends) for s in inst.streams]
        self.best_key = (incumbent.objective(objective), incumbent.displacements)
        self.best = incumbent
        horizon = incumbent.makespan + max(self.lengths) + 1
        if horizon > MAX_HORIZON:
            raise ValueError(f"horizon {horizon} too large for exact search")
        self.load = np.zeros(horizon, dtype=np.int64)
        self.nodes = 0
        self.exhausted = False
        self.seen: set = set()

    def bound(self, disp) -> int:
        if self.objective == "last_displacement":
            return max((x for x in disp if x is not None), default=0)
        return max(x + L if x is not None else L for x, L in zip(disp, self.lengths))

    def fits(self, i: int, x: int) -> bool:
        L = self.lengths[i]
        return bool(np.all(self.load[x:x + L] + self.dense[i] <= self.B))

    def candidates(self, disp, i: int) -> list[int]:
        placed = [o for o in range(self.m) if disp[o] is not None]
        vals = {0}
        for o in placed:
            vals.update((disp[o] + self.ends[o][:, None] - self.starts[i][None, :]).ravel().tolist())
        limit = self.best_key[0] if self.objective == "last_displacement" else self.best_key[0] - self.lengths[i]
        return sorted(v for v in vals if 0 <= v <= limit)

    def run(self):
        self.dfs([None] * self.m, 0)

    def dfs(self, disp, placed: int):
        if self.exhausted:
            return
        key = tuple(disp)
        if key in self.seen:
            return
        self.seen.add(key)
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        if self.bound(disp) > self.best_key[0]:
            return
        if placed == self.m:
            cand = (self.bound(disp), key)
            if cand < self.best_key:
                self.best_key = cand
                self.best = MultiScheduleResult.from_displacements(self.inst, disp)
            return
        for i in range(self.m):
            if disp[i] is not None:
                continue
            for x in self.candidates(disp, i):
                if not self.fits(i, x):
                    continue
                disp[i] = x
                self.load[x:x + self.lengths[i]] += self.dense[i]
                if self.bound(disp) <= self.best_key[0]:
                    self.dfs(disp, placed + 1)
                self.load[x:x + self.lengths[i]] -= self.dense[i]
                disp[i] = None
                if self.exhausted:
                    return


def exact_small(
    inst: MultiInstance,
    objective: str = "makespan",
    budget: int = DEFAULT_BUDGET,
) -> MultiScheduleResult:
    """Globally optimal displacements by branch and bound.

    Ties are broken towards the lexicographically smallest displacement
    vector.  If more than ``budget`` nodes are expanded the best schedule found
    so far is returned with ``optimal=False``.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}; choose from {OBJECTIVES}")
    if budget <= 0:
        raise ValueError("budget must be positive")
    _check_streams(inst)
    m = len(inst)
    orders = itertools.permutations(range(m)) if m <= 5 else [default_order(inst)]
    incumbent = min(
        (greedy_sequential(inst, o) for o in orders),
        key=lambda r: (r.objective(objective), r.displacements),
    )
    search = _Search(inst, objective, budget, incumbent)
    search.run()
    best = search.best
    return MultiScheduleResult(best.displacements, best.makespan, best.last_displacement,
                               optimal=not search.exhausted, nodes=search.nodes)
