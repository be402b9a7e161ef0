"""Compare the compiled gather/scatter kernels against the NumPy fallback.

The backend is chosen at import time, so the fallback timing runs in a
subprocess with CURVEWAVE_PURE_PYTHON=1.  Usage:

    python benchmarks/bench_kernels.py [N] [repeats]
"""

import json
import os
import subprocess
import sys
import time


def measure(n: int, repeats: int) -> dict:
    import numpy as np

    import curvewave as cw

    table = cw.build_frame(cw.FrameParams(n=n, scales=max(1, n.bit_length() - 3)))
    rng = np.random.default_rng(0)
    f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    coeffs = cw.analyze(table, f)  # warm-up / plan caches
    start = time.perf_counter()
    for _ in range(repeats):
        coeffs = cw.analyze(table, f)
    t_analyze = (time.perf_counter() - start) / repeats
    start = time.perf_counter()
    for _ in range(repeats):
        cw.synthesize(table, coeffs)
    t_synth = (time.perf_counter() - start) / repeats
    return {"backend": cw.BACKEND, "n": n, "analyze_ms": t_analyze * 1e3, "synthesize_ms": t_synth * 1e3}


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 256
    repeats = int(sys.argv[2]) if len(sys.argv) > 2 else 20

    if os.environ.get("_BENCH_CHILD"):
        print(json.dumps(measure(n, repeats)))
        return

    here = measure(n, repeats)
    env = dict(os.environ, CURVEWAVE_PURE_PYTHON="1", _BENCH_CHILD="1")
    out = subprocess.run(
        [sys.executable, __file__, str(n), str(repeats)], env=env, capture_output=True, text=True, check=True
    )
    other = json.loads(out.stdout.strip().splitlines()[-1])

    rows = sorted([here, other], key=lambda r: r["backend"])
    print(f"grid {n} x {n}, {repeats} repeats")
    print(f"{'backend':<10} {'analyze':>12} {'synthesize':>12}")
    for row in rows:
        print(f"{row['backend']:<10} {row['analyze_ms']:>10.2f}ms {row['synthesize_ms']:>10.2f}ms")
    if here["backend"] != other["backend"]:
        speed = other["analyze_ms"] / here["analyze_ms"]
        print(f"analyze speedup ({here['backend']} vs {other['backend']}): {speed:.2f}x")


if __name__ == "__main__":
    main()
