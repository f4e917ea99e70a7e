"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_backends.py --sizes 1000,10000 --trials 5

Both backends are imported side by side from ``vbrcac._kernels`` so the
comparison runs in one process regardless of VBRCAC_DISABLE_NUMBA.  Every
call's output is checked against the other backend before it is timed.
"""
import argparse
import statistics
import sys
import time

import numpy as np

from vbrcac import _kernels
from vbrcac.bench import regime_instance


def by_height(env):
    o = np.argsort(-env.heights, kind="stable")
    return env.heights[o], env.starts[o], env.ends[o]


def cases(s1, s2, bandwidth, shift):
    plain = (s1.heights, s1.starts, s1.ends, s2.heights, s2.starts, s2.ends)
    return {
        "naive_pairs": plain + (bandwidth,),
        "morph_pairs": by_height(s1) + by_height(s2) + (bandwidth,),
        "overlay_max": plain + (shift,),
    }


def same(a, b):
    if isinstance(a, tuple):
        # pair order may differ between backends
        return a[2] == b[2] and sorted(zip(a[0].tolist(), a[1].tolist())) == sorted(zip(b[0].tolist(), b[1].tolist()))
    return a == b


def clock(fn, args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, (time.perf_counter() - t0) * 1e6


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,5000,20000")
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--regime", default="mixed", choices=("low", "adversarial", "mixed"))
    ap.add_argument("--bandwidth", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1
    sizes = [int(x) for x in args.sizes.split(",") if x]
    rng = np.random.default_rng(args.seed)

    # compile outside the timed region
    w1, w2 = regime_instance(np.random.default_rng(0), 8, "mixed", args.bandwidth)
    for name, a in cases(w1, w2, args.bandwidth, 3).items():
        getattr(_kernels.numba_impl, name)(*a)

    print(f"{'kernel':<12}{'size':>8}{'numpy_us':>14}{'numba_us':>14}{'speedup':>10}")
    for size in sizes:
        times = {}
        for _ in range(args.trials):
            s1, s2 = regime_instance(rng, size, args.regime, args.bandwidth)
            shift = int(rng.integers(0, s1.length + 1))
            for name, a in cases(s1, s2, args.bandwidth, shift).items():
                ref, t_np = clock(getattr(_kernels.numpy_impl, name), a)
                got, t_nb = clock(getattr(_kernels.numba_impl, name), a)
                if not same(ref, got):
                    print(f"backend mismatch in {name} at size {size}", file=sys.stderr)
                    return 1
                times.setdefault(name, ([], []))
                times[name][0].append(t_np)
                times[name][1].append(t_nb)
        for name, (np_t, nb_t) in times.items():
            a, b = statistics.median(np_t), statistics.median(nb_t)
            print(f"{name:<12}{size:>8}{a:>14.1f}{b:>14.1f}{a / b:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
