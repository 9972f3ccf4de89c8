"""Time the numba kernels against the numpy ones.

    python3 benchmarks/bench_kernels.py [--repeat N]

Kernel timings use the same inputs for both paths.  The end-to-end rows run
the figure-eight volume solve and the quantum check suite in fresh
subprocesses with QDVOLUME_NUMBA set, so compile time shows up there.
"""
import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from qdvolume import _kernels
from qdvolume.braid import build_diagram, parse_braid
from qdvolume.glue import assemble


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def kernel_rows(repeat):
    nb = dict(zip(["line", "arc", "grad_hess", "grad"], _kernels.numba_kernels()))
    np_ = dict(zip(["line", "arc", "grad_hess", "grad"], _kernels.NUMPY_KERNELS))
    S = assemble(build_diagram(parse_braid("1 -2 1 -2")))
    rng = np.random.default_rng(0)
    v = 0.3 * (rng.normal(size=S.k) + 1j * rng.normal(size=S.k))
    x = np.linspace(0.5, 20.0, 21)
    th = np.linspace(0.0, np.pi, 21)
    cases = {
        "line (21 nodes)": lambda k: k["line"](x, 0.4 + 0.1j, 0.5),
        "arc (21 nodes)": lambda k: k["arc"](th, 0.5, 0.4 + 0.1j, 0.5),
        "grad_hess (k=8)": lambda k: k["grad_hess"](S.A, S.c, S.s, S.M, S.b, v),
        "grad (k=8)": lambda k: k["grad"](S.A, S.c, S.s, S.M, S.b, v),
    }
    rows = []
    for name, f in cases.items():
        f(nb)  # compile outside the timer
        a = np.asarray(f(nb)[0] if name.startswith("grad_hess") else f(nb))
        b = np.asarray(f(np_)[0] if name.startswith("grad_hess") else f(np_))
        diff = float(np.max(np.abs(a - b)))
        tn = best(lambda: f(nb), repeat, 2000)
        tp = best(lambda: f(np_), repeat, 2000)
        rows.append((name, tn, tp, diff))
    return rows


def end_to_end(flag, code):
    env = dict(os.environ, QDVOLUME_NUMBA=flag)
    t = time.perf_counter()
    subprocess.run([sys.executable, "-c", code], env=env, check=True, capture_output=True)
    return time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<18}{'numba us':>11}{'numpy us':>11}{'speedup':>9}{'max diff':>11}")
    for name, tn, tp, d in kernel_rows(args.repeat):
        print(f"{name:<18}{tn * 1e6:>11.2f}{tp * 1e6:>11.2f}{tp / tn:>9.1f}{d:>11.1e}")
    jobs = {
        "volume 1 -2 1 -2": "from qdvolume.cli import main; main(['volume', '--braid', '1 -2 1 -2'], out=open('/dev/null', 'w'))",
        "check quantum": "from qdvolume.cli import main; main(['check', 'quantum'], out=open('/dev/null', 'w'))",
    }
    print(f"\n{'end to end':<18}{'numba s':>11}{'numpy s':>11}")
    for name, code in jobs.items():
        tn = min(end_to_end("1", code) for _ in range(2))
        tp = min(end_to_end("0", code) for _ in range(2))
        print(f"{name:<18}{tn:>11.2f}{tp:>11.2f}")


if __name__ == "__main__":
    main()
