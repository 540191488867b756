import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SSV_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("ssv.oracle._kernel", ["src/ssv/oracle/_kernel.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # Pure-python kernel is selected at import time when the
        # extension is unavailable.
        ext_modules = []

setup(ext_modules=ext_modules)
