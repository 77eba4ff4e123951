"""Time every kernel under the numba and numpy backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]

Compile time is paid in a warm-up call and excluded.  A second section runs
end-to-end jobs in subprocesses with and without ``BRAIDSIG_DISABLE_NUMBA``.
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from braidsig import kernels
from braidsig.braid import BraidWord
from braidsig.garside3 import Workspace
from braidsig.plumbing import pentafoil_decompose
from braidsig.seifert import _brick_arrays


def _inputs(rng):
    w6 = BraidWord(6, tuple(int(x) for x in rng.integers(1, 6, size=1000)))
    cols, starts, ends = _brick_arrays(w6)
    m = cols.size

    w3 = BraidWord(3, tuple(int(x) for x in rng.integers(1, 3, size=500)))
    d = pentafoil_decompose(w3)
    cert = d.certificate
    start = np.asarray(w3.letters, dtype=np.int8)

    blocks = np.array([1, 2, 1] * 200 + [2] * 50, dtype=np.int8)
    words = rng.integers(1, 3, size=(20000, 12)).astype(np.int8)
    thetas = np.arange(1, 998) / 998
    is_x = rng.random(start.size) < 0.1
    return {
        "seifert_fill": lambda f: f(cols, starts, ends, np.zeros((m, m), dtype=np.int64)),
        "block_left": lambda f: f(blocks.copy(), 600, 10),
        "block_right": lambda f: f(blocks.copy(), 570, 10),
        "letter_left": lambda f: f(blocks.copy(), 600, 200),
        "letter_right": lambda f: f(np.concatenate((blocks[600:601], blocks[:600])), 0, 200),
        "replay_moves": lambda f: f(start, np.zeros(start.size, dtype=np.int64), cert),
        "remap_moves": lambda f: f(is_x, cert[: min(cert.shape[0], 2000)]),
        "torus2_counts": lambda f: f(400, thetas, 1e-12),
        "min_rotation_mask": lambda f: f(words),
    }


def _time(call, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        call()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_table(repeat: int) -> list[dict]:
    rng = np.random.default_rng(0)
    cases = _inputs(rng)
    compiled = kernels.numba_kernels()
    rows = []
    for name, run in cases.items():
        fast, slow = compiled[name], kernels.NUMPY_KERNELS[name]
        run(fast)
        t_numba = _time(lambda: run(fast), repeat)
        t_numpy = _time(lambda: run(slow), repeat)
        rows.append({"kernel": name, "numba_s": t_numba, "numpy_s": t_numpy, "speedup": t_numpy / t_numba})
    return rows


_JOBS = {
    "levine_tristram n=6 L=1000": (
        "import numpy as np, time\n"
        "from braidsig.braid import BraidWord\nfrom braidsig.signature import levine_tristram\n"
        "w = BraidWord(6, tuple(int(x) for x in np.random.default_rng(1).integers(1, 6, size=1000)))\n"
        "levine_tristram(BraidWord(3, (1, 1, 2, 2)), 0.5)\n"
        "t = time.perf_counter(); levine_tristram(w, 0.5); print(time.perf_counter() - t)\n"
    ),
    "pentafoil_decompose 200 words L<=500": (
        "import numpy as np, time\n"
        "from braidsig.braid import BraidWord\nfrom braidsig.plumbing import pentafoil_decompose\n"
        "rng = np.random.default_rng(2)\n"
        "ws = [BraidWord(3, tuple(int(x) for x in rng.integers(1, 3, size=int(rng.integers(0, 501))))) for _ in range(200)]\n"
        "pentafoil_decompose(BraidWord(3, (1, 2) * 20))\n"
        "t = time.perf_counter()\n"
        "for w in ws: pentafoil_decompose(w)\n"
        "print(time.perf_counter() - t)\n"
    ),
}


def end_to_end() -> list[dict]:
    rows = []
    for name, code in _JOBS.items():
        row = {"job": name}
        for label, flag in (("numba_s", "0"), ("numpy_s", "1")):
            env = dict(os.environ, BRAIDSIG_DISABLE_NUMBA=flag)
            out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
            row[label] = float(out.stdout.strip().splitlines()[-1])
        row["speedup"] = row["numpy_s"] / row["numba_s"]
        rows.append(row)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()
    result = {"kernels": kernel_table(args.repeat)}
    if not args.skip_end_to_end:
        result["end_to_end"] = end_to_end()
    if args.json:
        print(json.dumps(result, indent=1))
        return
    print(f"{'kernel':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for r in result["kernels"]:
        print(f"{r['kernel']:<22}{1e3 * r['numba_s']:>12.3f}{1e3 * r['numpy_s']:>12.3f}{r['speedup']:>10.1f}")
    for r in result.get("end_to_end", []):
        print(f"{r['job']:<40} numba {r['numba_s']:.3f}s  numpy {r['numpy_s']:.3f}s  x{r['speedup']:.1f}")


if __name__ == "__main__":
    main()
