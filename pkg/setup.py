"""Build script: compiles the optional Cython kernel core.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile must not abort installation.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "ir2emo.kernels._fast",
                ["src/ir2emo/kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
