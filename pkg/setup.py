"""Build script: compiles the optional Cython hot-kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so any failure to build it is non-fatal.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "ratepriv._fastcore",
                ["src/ratepriv/_fastcore.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    sys.stderr.write(f"ratepriv: skipping compiled core ({exc}); numpy fallback will be used\n")
    ext_modules = []

setup(ext_modules=ext_modules)
