"""Build script: compiles the hot-loop extension when Cython is available.

The package is fully functional without the extension (a pure-Python twin of
every kernel is selected at import time); set PTHETA_NO_EXT=1 to skip the
compile step explicitly.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("PTHETA_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "ptheta._core",
                    ["src/ptheta/_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
