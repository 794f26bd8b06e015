"""Build script for the optional compiled kernels.

The package is fully functional without the extension (a pure-python
fallback is selected at import time), so a missing Cython or numpy at
build time degrades to a pure install instead of failing.
"""
import sys

from setuptools import Extension, setup


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"poseweights: skipping compiled kernels ({exc})", file=sys.stderr)
        return []
    return cythonize(
        [
            Extension(
                "poseweights._kernels._ckernels",
                ["src/poseweights/_kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions())
