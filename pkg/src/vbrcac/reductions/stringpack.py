"""String Pack and its translation into multi-stream scheduling."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..envelope import envelope_from_bits
from ..multistream import DEFAULT_BUDGET, MultiInstance, MultiScheduleResult, exact_small


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class StringPackInstance:
    strings: tuple[str, ...]

    def __post_init__(self):
        strings = tuple(self.strings)
        if not strings:
            raise ValueError("need at least one string")
        n = len(strings[0])
        if n == 0:
            raise ValueError("strings must be non-empty")
        for k, s in enumerate(strings):
            if len(s) != n:
                raise ValueError(f"string {k} has length {len(s)}, expected {n}")
            if set(s) - {"0", "1"}:
                raise ValueError(f"string {k} is not binary: {s!r}")
        object.__setattr__(self, "strings", strings)

    @property
    def m(self) -> int:
        return len(self.strings)

    @property
    def n(self) -> int:
        return len(self.strings[0])

    def masks(self) -> list[int]:
        # bit t set <=> column t holds a '1'
        return [int(s[::-1], 2) for s in self.strings]

    def to_json(self) -> dict:
        return {"strings": list(self.strings)}


def verify_packing(strings: Sequence[str], offsets: Sequence[int]) -> int | None:
    """Return the first column holding two '1's, or None if the packing is valid."""
    seen: dict[int, int] = {}
    first = None
    for s, off in zip(strings, offsets):
        for t, c in enumerate(s):
            if c == "1":
                col = off + t
                if col in seen and (first is None or col < first):
                    first = col
                seen[col] = 1
    return first


def packing_span(n: int, offsets: Sequence[int]) -> int:
    return max(offsets) - min(offsets) + n


def stringpack_to_mss(sp: StringPackInstance) -> MultiInstance:
    """One unit-tick stream per string on a channel of bandwidth 1."""
    return MultiInstance(tuple(envelope_from_bits(s) for s in sp.strings), 1)


def pack_via_mss(sp: StringPackInstance, budget: int = DEFAULT_BUDGET) -> tuple[int, MultiScheduleResult]:
    """Optimal packing length as ``n`` plus the optimal last displacement."""
    res = exact_small(stringpack_to_mss(sp), "last_displacement", budget)
    return sp.n + res.last_displacement, res


def stringpack_brute(sp: StringPackInstance, max_len: int | None = None, budget: int = 10**7) -> int | None:
    """Minimal packing length by exhaustive search over offset tuples.

    Tries spans ``n, n+1, ...`` and for each span every offset in
    ``[0, span - n]`` per string, with bitmask collision tests.  Returns None
    if nothing fits within ``max_len`` (default ``m * n``, always packable).
    """
    n, m = sp.n, sp.m
    max_len = m * n if max_len is None else max_len
    masks = sp.masks()
    nodes = 0

    def fits(k: int, acc: int, width: int) -> bool:
        nonlocal nodes
        if k == m:
            return True
        for off in range(width + 1):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"more than {budget} offsets tried")
            shifted = masks[k] << off
            if not acc & shifted and fits(k + 1, acc | shifted, width):
                return True
        return False

    for span in range(n, max_len + 1):
        if fits(0, 0, span - n):
            return span
    return None
