"""Builds the optional compiled kernel extension.

Set ROBY_NO_EXT=1 to skip the extension entirely; the package falls back
to the numpy kernels at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("ROBY_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "roby._ckernels",
                    ["src/roby/_ckernels.pyx"],
                    extra_compile_args=["-O3", "-fopenmp"],
                    extra_link_args=["-fopenmp"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
