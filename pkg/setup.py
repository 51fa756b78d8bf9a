"""Builds the optional compiled propagation kernel.

The package is fully functional without it (a NumPy fallback is selected at
import time); set WOLFSIM_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("WOLFSIM_NO_EXT") != "1":
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "wolfsim.engine._cykernel",
                ["src/wolfsim/engine/_cykernel.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
