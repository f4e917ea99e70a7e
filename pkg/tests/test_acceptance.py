"""Exit criteria.  Each test is one criterion; the summary prints PASS/FAIL per line."""
import itertools
import time

import numpy as np
import pytest

from vbrcac.admission import min_displacement
from vbrcac.bench import run_bench
from vbrcac.generate import random_2ss, random_envelope, random_scp, random_stringpack
from vbrcac.multistream import verify_schedule
from vbrcac.reductions import (
    Graph,
    StringPackInstance,
    best_group_packing,
    colors_from_span,
    graph_to_stringpack,
    pack_via_mss,
    scp_brute,
    scp_via_2ss,
    self_aligning,
    stringpack_brute,
    stringpack_to_mss,
    verify_packing,
    verify_self_aligning,
    vertex_color_brute,
)

ALGOS = ("naive", "morph", "oracle")


def dense(env):
    out = np.zeros(env.length, dtype=np.int64)
    for h, s, e in env.peaks:
        out[s:e] = h
    return out


def dense_feasible(a, b, t, bw):
    size = max(len(a), len(b) + t)
    load = np.zeros(size, dtype=np.int64)
    load[:len(a)] += a
    load[t:t + len(b)] += b
    return load.max(initial=0) <= bw


@pytest.mark.acceptance(1, "naive, morph and oracle displacements identical")
def test_oracle_equivalence(detail):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    count = 0
    for _ in range(1200):
        bw = int(rng.integers(1, 21))
        s1, s2 = random_2ss(rng, 25, bw)
        res = [min_displacement(s1, s2, bw, a) for a in ALGOS]
        assert len({r.displacement for r in res}) == 1, (s1, s2, bw, res)
        assert res[0].displacement is not None
        count += 1
    # peaks up to 2B: any peak above B makes the instance infeasible for all three
    infeasible = 0
    for _ in range(200):
        bw = int(rng.integers(1, 21))
        s1 = random_envelope(rng, int(rng.integers(1, 26)), 2 * bw, 10)
        s2 = random_envelope(rng, int(rng.integers(1, 26)), 2 * bw, 10)
        res = [min_displacement(s1, s2, bw, a) for a in ALGOS]
        assert len({r.displacement for r in res}) == 1
        infeasible += res[0].displacement is None
        count += 1
    elapsed = time.perf_counter() - t0
    detail(f"{count} instances, {infeasible} infeasible, {elapsed:.1f}s")
    assert elapsed < 30


@pytest.mark.acceptance(2, "no feasible displacement below the reported one")
def test_minimality(detail):
    rng = np.random.default_rng(2)
    checked, scanned = 0, 0
    while checked < 250:
        bw = int(rng.integers(1, 21))
        s1, s2 = random_2ss(rng, 25, bw, max_len=8)
        if s1.length > 200:
            continue
        t = min_displacement(s1, s2, bw, "morph").displacement
        assert t <= 200
        a, b = dense(s1), dense(s2)
        assert dense_feasible(a, b, t, bw)
        assert not any(dense_feasible(a, b, x, bw) for x in range(t))
        scanned += t
        checked += 1
    detail(f"{checked} instances, {scanned} smaller displacements rejected")


@pytest.mark.acceptance(3, "morph pair_count equals the exhaustive count; all-conflict regime gives n*m")
def test_pair_count(detail):
    rows = 0
    for regime in ("low", "mixed", "adversarial"):
        rep = run_bench([10, 100, 1000], trials=3, seed=3, regime=regime)
        for r in rep.rows:
            assert r.reported["morph"] == r.pairs == r.reported["oracle"] == r.reported["naive"]
            if regime == "adversarial":
                assert r.pairs == r.n * r.m
            if regime == "low":
                assert r.pairs == 0
            rows += 1
    detail(f"{rows} bench rows across 3 regimes")


@pytest.mark.acceptance(4, "segments-containing-points round trip")
def test_scp_round_trip(detail):
    rng = np.random.default_rng(4)
    yes = 0
    for _ in range(600):
        scp = random_scp(rng, 8, 8, 30)
        want = scp_brute(scp)
        u, res, red = scp_via_2ss(scp)
        assert (want is not None) == (res.displacement < red.threshold)
        assert u == want
        if u is not None:
            assert scp.contains(u)
            yes += 1
    detail(f"600 instances, {yes} with a translation")


@pytest.mark.acceptance(5, "string pack optimum equals n + exact last displacement")
def test_stringpack_round_trip(detail):
    t0 = time.perf_counter()
    exhaustive = 0
    for n in range(1, 5):
        alphabet = ["".join(bits) for bits in itertools.product("01", repeat=n)]
        for m in range(1, 4):
            for strings in itertools.combinations_with_replacement(alphabet, m):
                sp = StringPackInstance(strings)
                length, res = pack_via_mss(sp)
                assert res.optimal
                assert length == stringpack_brute(sp), strings
                assert verify_packing(strings, res.displacements) is None
                exhaustive += 1
    rng = np.random.default_rng(5)
    for _ in range(150):
        sp = random_stringpack(rng, 4, 6)
        length, res = pack_via_mss(sp)
        assert res.optimal and length == stringpack_brute(sp), sp.strings
    elapsed = time.perf_counter() - t0
    detail(f"{exhaustive} exhaustive + 150 random 4x6, {elapsed:.1f}s")
    assert exhaustive == 1175
    assert elapsed < 120


@pytest.mark.acceptance(6, "a 4x6 instance packs in length 8 through multi-stream scheduling")
def test_four_by_six_packs_in_eight(detail):
    found = []
    rng = np.random.default_rng(2024)
    for _ in range(400):
        sp = random_stringpack(rng, 4, 6, 0.4)
        if stringpack_brute(sp) == 8:
            found.append(sp)
    assert found
    for sp in found:
        length, res = pack_via_mss(sp)
        assert length == 8 and res.last_displacement == 2
        assert verify_schedule(stringpack_to_mss(sp), res) == []
    detail(f"{len(found)} instance(s) with optimum 8, e.g. {list(found[0].strings)}")


@pytest.mark.acceptance(7, "self-aligning sets (2,16) and (3,81) verify; L = n^2 + l*n + n^4")
def test_self_aligning(detail):
    for n, l in ((2, 16), (3, 81)):
        sa = self_aligning(n, l)
        assert sa.length == n * n + l * n + n**4
        t0 = time.perf_counter()
        assert verify_self_aligning(sa) is None
        elapsed = time.perf_counter() - t0
        assert elapsed < 300
    for n in range(2, 6):
        assert self_aligning(n, n**4).length == n * n + n**5 + n**4
    detail(f"n=3 verified in {elapsed:.2f}s")


@pytest.mark.acceptance(8, "recovered colors equal the chromatic number on every graph up to 4 vertices")
def test_coloring_recovery(detail):
    graphs = 0
    for v in range(1, 5):
        all_edges = list(itertools.combinations(range(v), 2))
        for mask in range(1 << len(all_edges)):
            g = Graph(v, tuple(e for k, e in enumerate(all_edges) if mask >> k & 1))
            red = graph_to_stringpack(g)
            packing = best_group_packing(red)
            assert verify_packing(red.instance.strings, packing.offsets) is None
            assert colors_from_span(packing.span, red.string_length, red.slack) == vertex_color_brute(g), g
            graphs += 1
    star = Graph(4, ((0, 3), (1, 3), (2, 3)))
    red = graph_to_stringpack(star)
    assert colors_from_span(best_group_packing(red).span, red.string_length, red.slack) == 2
    detail(f"{graphs} graphs, 64 of them on 4 vertices")
    assert graphs == 1 + 2 + 8 + 64


@pytest.mark.slow
@pytest.mark.acceptance(9, "morph/naive median time ratio falls across n = 1e3, 1e4, 1e5 with P = 0")
def test_scaling(detail):
    sizes = (1_000, 10_000, 100_000)
    ratios = []
    for size, trials in zip(sizes, (7, 5, 3)):
        rep = run_bench([size], trials=trials, seed=9, regime="low", algorithms=("naive", "morph"))
        assert all(r.pairs == 0 for r in rep.rows)
        med = rep.medians()
        ratios.append(med[(size, "morph")] / med[(size, "naive")])
    detail("ratios " + ", ".join(f"{r:.4f}" for r in ratios))
    assert ratios[0] > ratios[1] > ratios[2]
