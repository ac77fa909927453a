"""Build script: compiles the optional Cython kernel extension.

The extension accelerates the polyphase resampler and the per-frame
speech-band energy kernels. It is strictly optional: if Cython or a C
compiler is missing the package installs pure-Python and selects the
numpy fallback at import time (see emovoice._kernels).
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("EMOVOICE_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "emovoice._kernels._core",
                    ["src/emovoice/_kernels/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
