"""Build script: compiles the optional GF(p) reduction kernel.

When Cython or a C compiler is unavailable the package still installs and
falls back to the pure-Python engine at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("IRREP_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("irrep._gfp", ["src/irrep/_gfp.pyx"],
                       extra_compile_args=["-O3"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
