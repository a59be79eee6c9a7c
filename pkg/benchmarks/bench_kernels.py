"""Compare the compiled and numpy finite-volume kernels.

Usage: python3 benchmarks/bench_kernels.py [--sizes 1024 4096 16384] [--repeat 5] [--json FILE]

Times one call of ``rates`` on a perturbed grid and a short ``sim.run`` for
each backend, and checks that both backends produce identical output.
"""
import argparse
import json
import timeit

import numpy as np

from hypns import kernels, sim
from hypns.eos import PhysicalParams


def bench(sizes, repeat):
    params = PhysicalParams(tau1=10, tau2=10, kappa=15, mu=10)
    spec = sim.InitialData(family="sawtooth", amplitude=0.2, width=1.0)
    consts = sim._consts(params)
    eq = sim._eq_speed(params)
    backends = ["numpy"] + (["cython"] if kernels.compiled_backend is not None else [])
    rows = []
    for n in sizes:
        st = sim.make_initial_data(spec, params, n)
        args = (st.v, st.u, st.E, st.q, st.S, st.dx, consts, eq)
        outs = {}
        row = {"cells": n}
        for name in backends:
            mod = kernels.python_backend if name == "numpy" else kernels.compiled_backend
            outs[name] = mod.rates(*args)
            t = min(timeit.repeat(lambda: mod.rates(*args), number=5, repeat=repeat)) / 5
            row[f"rates_{name}_ms"] = 1e3 * t
            prev = kernels.use(name)
            t = min(timeit.repeat(lambda: sim.run(spec, params, 0.5, resolution=n,
                                                  check_boundary=False),
                                  number=1, repeat=max(1, repeat // 2)))
            kernels.use(prev)
            row[f"run_{name}_s"] = t
        if len(backends) == 2:
            row["max_abs_diff"] = max(float(np.max(np.abs(a - b)))
                                      for a, b in zip(outs["numpy"], outs["cython"]))
            row["rates_speedup"] = row["rates_numpy_ms"] / row["rates_cython_ms"]
            row["run_speedup"] = row["run_numpy_s"] / row["run_cython_s"]
        rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1024, 4096, 16384])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write the results as JSON")
    args = ap.parse_args()
    rows = bench(args.sizes, args.repeat)
    keys = list(rows[0])
    print(" ".join(f"{k:>16}" for k in keys))
    for r in rows:
        print(" ".join(f"{r[k]:>16.4g}" if isinstance(r[k], float) else f"{r[k]:>16}" for k in keys))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
