"""Build script for the compiled pair-sum kernels.

The extension is optional: if Cython or a C compiler is unavailable the
package installs anyway and falls back to the numpy implementations in
fracsob._kernels._fallback.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "fracsob._kernels._core",
                ["src/fracsob/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
