import os

from setuptools import Extension, setup

extensions = []
if os.environ.get("LINENC_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "linenc._ckernels",
                    ["src/linenc/_ckernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # no Cython: the pure-Python kernels are selected at import time
        extensions = []

setup(ext_modules=extensions)
