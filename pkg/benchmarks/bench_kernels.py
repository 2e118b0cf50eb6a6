"""Time the numba and numpy kernel backends on the same inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Each kernel runs once per backend to warm up (JIT compile, cache), then the
best of ``--repeat`` timings is reported.  Outputs are compared so a
speedup never hides a disagreement.
"""

import argparse
import time

import numpy as np

from uordkit import _accel, kernels
from uordkit.corpus import downset_lattice, random_uords
from uordkit.dcompletion import dcomplete


def cases():
    rng = np.random.default_rng(0)
    r = rng.random((10, 10)) < 0.3
    s = rng.random((10, 10)) < 0.3
    # fam(D(U)) fibers: 8 values over 3 points, as in the tripos audits
    u = [u for _, u in random_uords(20, 1, max_size=3) if u.size == 3][0]
    d = dcomplete(u)
    digits = kernels.enumerate_digits(d.carrier.size, 3)
    gens = d.lifted.gen_array()
    order = np.triu(rng.random((6, 6)) < 0.4) | np.eye(6, dtype=bool)
    for _ in range(6):
        order = order | ((order.astype(int) @ order.astype(int)) > 0)
    lat = downset_lattice(order)
    meet = kernels.glb_table(lat)
    return [
        ("compose 10x10", kernels.compose, (r, s)),
        ("lift 10 points", kernels.lift, (r,)),
        ("fiber_leq 512x512", kernels.fiber_leq, (digits, digits, gens)),
        (f"glb_table {lat.shape[0]}", kernels.glb_table, (lat,)),
        (f"heyting_table {lat.shape[0]}", kernels.heyting_table, (lat, meet)),
    ]


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    names = ["numpy", "numba"] if _accel.HAVE_NUMBA else ["numpy"]
    print(f"{'kernel':24s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn, args in cases():
        row, outs = [], []
        for name in names:
            prev = _accel.set_backend(name)
            try:
                fn(*args)  # warm-up
                t, out = best_of(fn, args, opts.repeat)
            finally:
                _accel.set_backend(prev)
            row.append(t)
            outs.append(out)
        assert all(np.array_equal(o, outs[0]) for o in outs), label
        line = f"{label:24s}" + "".join(f"{t * 1e3:10.3f}ms" for t in row)
        if len(row) == 2:
            line += f"  {row[0] / row[1]:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
