"""Builds the optional compiled tableau kernels.

The extension is optional: without Cython or a C compiler the package
installs with the pure-Python kernels only.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("PSAT_NO_EXTENSION"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "psat.ratlp._kernels",
                    ["src/psat/ratlp/_kernels.pyx"],
                    extra_compile_args=["-O2"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
