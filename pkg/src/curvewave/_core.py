"""Backend selection and shared runtime knobs.

The wrapping transform's inner loops exist twice: a Cython extension and a
NumPy fallback with the same signatures.  The compiled one is used when it
imported successfully; set CURVEWAVE_PURE_PYTHON=1 to force the fallback
(used by the benchmark to compare both).  CURVEWAVE_THREADS caps the FFT
worker pool and column-level parallelism.
"""

import os

if os.environ.get("CURVEWAVE_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND


def thread_count() -> int:
    raw = os.environ.get("CURVEWAVE_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def fft_workers() -> int | None:
    n = thread_count()
    return n if n > 1 else None
