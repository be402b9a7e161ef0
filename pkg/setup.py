"""Build the optional compiled gather/scatter kernels.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so any build failure here downgrades to a pure
Python install instead of aborting.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("curvewave._kernels", ["src/curvewave/_kernels.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"curvewave: skipping compiled kernels ({exc}); using NumPy fallback")

setup(ext_modules=ext_modules)
