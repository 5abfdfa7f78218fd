"""Build script for the optional compiled kernel.

The extension is skipped when Cython or a compiler is unavailable; the
package then runs on the numpy fallback in ``ncdegree._kernels._pure``.
"""
import os

import numpy as np
from setuptools import setup

ext_modules = []
if not os.environ.get("NCDEGREE_NO_EXTENSION"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "ncdegree._kernels._native",
                    ["src/ncdegree/_kernels/_native.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )

setup(ext_modules=ext_modules)
