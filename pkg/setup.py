"""Build script for the optional compiled kernel.

The package is pure Python plus one optional Cython extension holding the
hot state-vector kernels. If Cython or a C compiler is unavailable the
build falls back to the pure-numpy kernels selected at import time.
Set MAJEX_NO_EXT=1 to skip the extension entirely.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MAJEX_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "majex._kernel",
                    ["src/majex/_kernel.pyx"],
                    include_dirs=[numpy.get_include()],
                    optional=True,
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
