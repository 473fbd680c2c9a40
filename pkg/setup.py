import os

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("LMGSTIELTJES_NO_EXT"):
    ext = Extension(
        "lmgstieltjes._kernels",
        sources=["src/lmgstieltjes/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        optional=True,
    )
    ext_modules = cythonize([ext], language_level="3",
                            compiler_directives={"boundscheck": False, "wraparound": False,
                                                 "cdivision": True})

setup(ext_modules=ext_modules)
