import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

openmp = os.environ.get("XSHUTTER_NO_OPENMP") is None

extensions = [
    Extension(
        "xshutter._warp_ext",
        ["src/xshutter/_warp_ext.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"] + (["-fopenmp"] if openmp else []),
        extra_link_args=["-fopenmp"] if openmp else [],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
)
