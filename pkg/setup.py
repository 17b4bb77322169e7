import os

from setuptools import Extension, setup

# The compiled kernel is optional: AFFDYN_NO_EXT=1 skips it and the package
# falls back to the pure-Python twin at import time.
ext_modules = []
if os.environ.get("AFFDYN_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("affdyn._speedups", ["src/affdyn/_speedups.pyx"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
