"""Vertex Color to String Pack through self-aligning flanking strings.

Each vertex string is ``SA_v + incidence_row(v) + SA_v``.  The flanks come
from an (n, k, L)-aligning set: two distinct rows never collide when
aligned, and collide for every relative shift ``1..L-k``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .stringpack import StringPackInstance, verify_packing


@dataclass(frozen=True)
class Graph:
    vertices: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.vertices < 0:
            raise ValueError("vertex count must be non-negative")
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError(f"edge ({u},{v}) out of range")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def incidence_rows(self) -> list[str]:
        rows = []
        for v in range(self.vertices):
            rows.append("".join("1" if v in e else "0" for e in self.edges))
        return rows

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class SelfAligningSet:
    rows: np.ndarray  # uint8, shape (n, L)
    slack: int
    block_length: int = 0

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def length(self) -> int:
        return self.rows.shape[1]

    @property
    def strings(self) -> list[str]:
        return ["".join("1" if b else "0" for b in row) for row in self.rows]

    @classmethod
    def from_strings(cls, strings: Sequence[str], slack: int, block_length: int = 0) -> "SelfAligningSet":
        rows = np.array([[c == "1" for c in s] for s in strings], dtype=np.uint8)
        return cls(rows, slack, block_length)


def self_aligning(n: int, l: int) -> SelfAligningSet:
    """Rows of ``[R_1 .. R_n  I^l  P_11 .. P_nn]``.

    ``R_i`` gives row i a run of n ones, ``I`` is the n x n identity repeated
    l times, and ``P_ij`` (n x n^2) puts ``100..0`` on row i and ``011..1``
    on row j.  For ``i == j`` the block keeps only the leading one.  Length is
    ``n^2 + l*n + n^4``; the slack bound recorded is ``n^2 + n^4``.
    """
    if n < 2 or l < 1:
        raise ValueError("need n >= 2 and l >= 1")
    L = n * n + l * n + n**4
    rows = np.zeros((n, L), dtype=np.uint8)
    for i in range(n):
        rows[i, i * n:(i + 1) * n] = 1
    base = n * n
    for rep in range(l):
        rows[np.arange(n), base + rep * n + np.arange(n)] = 1
    base += l * n
    w = n * n
    for i in range(n):
        for j in range(n):
            b = base + (i * n + j) * w
            if i != j:
                rows[j, b + 1:b + w] = 1
            rows[i, b] = 1
    return SelfAligningSet(rows, n * n + n**4, l)


def shift_collisions(fixed: np.ndarray, moved: np.ndarray) -> np.ndarray:
    """``out[r]`` = number of columns where ``fixed`` and ``moved`` (shifted right by r) both hold a 1."""
    conv = np.convolve(fixed.astype(np.int64), moved[::-1].astype(np.int64))
    return conv[len(moved) - 1:]


def verify_self_aligning(sa: SelfAligningSet) -> tuple[int, int, int] | None:
    """First ``(i, j, r)`` breaking the aligning properties, or None.

    Pairs are distinct rows.  ``r = 0`` reports a collision at zero shift;
    ``1 <= r <= L - k`` reports a shift at which the pair does not collide.
    """
    L, k = sa.length, sa.slack
    top = L - k
    for i in range(sa.n):
        for j in range(sa.n):
            if i == j:
                continue
            c = shift_collisions(sa.rows[i], sa.rows[j])
            if c[0] != 0:
                return (i, j, 0)
            if top >= 1:
                free = np.flatnonzero(c[1:top + 1] == 0)
                if free.size:
                    return (i, j, int(free[0]) + 1)
    return None


@dataclass(frozen=True)
class ColoringReduction:
    graph: Graph
    instance: StringPackInstance
    flanks: SelfAligningSet
    slack: int

    @property
    def string_length(self) -> int:
        return self.instance.n

    def rows(self) -> np.ndarray:
        return np.array([[c == "1" for c in s] for s in self.instance.strings], dtype=np.uint8)


def graph_to_stringpack(g: Graph, l: int | None = None) -> ColoringReduction:
    """Flank each incidence row with its vertex's self-aligning string.

    Graphs with fewer than two vertices borrow the 2-row flank set.
    """
    if g.vertices == 0:
        raise ValueError("graph has no vertices")
    n = max(g.vertices, 2)
    l = n**4 if l is None else l
    sa = self_aligning(n, l)
    k, L = sa.slack, sa.length
    if L - k < math.comb(n, 2) + k + 1:
        raise ValueError(f"l={l} too small: need L - k >= C(n,2) + k + 1 (L={L}, k={k}); increase l")
    flank = sa.strings
    inc = g.incidence_rows()
    strings = tuple(flank[v] + inc[v] + flank[v] for v in range(g.vertices))
    size = len(strings[0])
    if size + k <= k * g.vertices:
        raise ValueError(f"l={l} too small: need |s| + k > k*n (|s|={size}, k={k}); increase l")
    return ColoringReduction(g, StringPackInstance(strings), sa, k)


def colors_from_span(span: int, string_length: int, slack: int) -> int:
    """Number of completely overlapping groups implied by a packing span.

    The unique C with ``C*(|s|-k) + k <= span <= C*|s|``.
    """
    s, k = string_length, slack
    if s <= k:
        raise ValueError("string length must exceed the slack")
    c = -(-span // s)
    if c < 1 or c * (s - k) + k > span:
        raise ValueError(f"span {span} is not produced by whole groups of length {s} with slack {k}")
    return c


def vertex_color_brute(g: Graph, max_vertices: int = 10) -> int:
    """Chromatic number by backtracking over increasing color counts."""
    n = g.vertices
    if n > max_vertices:
        raise ValueError(f"{n} vertices exceeds the bound {max_vertices}")
    if n == 0:
        return 0
    nbrs = [[v for v in range(n) if g.adjacent(u, v)] for u in range(n)]
    color = [-1] * n

    def assign(u: int, k: int, used: int) -> bool:
        if u == n:
            return True
        taken = {color[v] for v in nbrs[u]}
        # a fresh color beyond `used` is symmetric to any other fresh one
        for c in range(min(used + 1, k)):
            if c not in taken:
                color[u] = c
                if assign(u + 1, k, max(used, c + 1)):
                    return True
        color[u] = -1
        return False

    for k in range(1, n + 1):
        if assign(0, k, 0):
            return k
    raise AssertionError("unreachable")


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


@dataclass(frozen=True)
class GroupPacking:
    groups: tuple[tuple[int, ...], ...]
    offsets: tuple[int, ...]  # per vertex
    span: int


def _first_free_shift(a: np.ndarray, b: np.ndarray, lo: int, hi: int) -> int | None:
    """Smallest r in [lo, hi) where ``b`` shifted by r misses every 1 of ``a``."""
    size = len(a)
    for r in range(max(lo, 0), hi):
        if not np.dot(a[r:], b[:size - r]):
            return r
    return None


def pack_groups(red: ColoringReduction, groups: Sequence[Sequence[int]], rows: np.ndarray | None = None) -> GroupPacking | None:
    """Pack whole groups left to right, consecutive groups overlapping by at most k.

    Returns None when some group's strings collide when aligned.
    """
    rows = red.rows() if rows is None else rows
    size, k = red.string_length, red.slack
    masks = []
    for grp in groups:
        mask = rows[list(grp)].sum(axis=0, dtype=np.int64)
        if mask.max(initial=0) > 1:
            return None
        masks.append(mask)
    starts = [0]
    for a, b in zip(masks, masks[1:]):
        r = _first_free_shift(a, b, size - k, size)
        starts.append(starts[-1] + (size if r is None else r))
    offsets = [0] * red.graph.vertices
    for grp, x in zip(groups, starts):
        for v in grp:
            offsets[v] = x
    if verify_packing(red.instance.strings, offsets) is not None:
        raise AssertionError("group packing collides")
    return GroupPacking(tuple(tuple(g) for g in groups), tuple(offsets), starts[-1] + size)


def best_group_packing(red: ColoringReduction) -> GroupPacking:
    """Shortest group-respecting packing over all partitions and group orders."""
    rows = red.rows()
    best = None
    for part in set_partitions(list(range(red.graph.vertices))):
        for order in itertools.permutations(part):
            p = pack_groups(red, order, rows)
            if p is not None and (best is None or p.span < best.span):
                best = p
    assert best is not None  # singletons always pack
    return best


def recover_colors(g: Graph, l: int | None = None) -> tuple[int, GroupPacking, ColoringReduction]:
    red = graph_to_stringpack(g, l)
    packing = best_group_packing(red)
    return colors_from_span(packing.span, red.string_length, red.slack), packing, red
