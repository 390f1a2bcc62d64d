"""Builds the optional compiled KL kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("KLCELLS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("klcells._klsolve", ["src/klcells/_klsolve.pyx"], extra_compile_args=["-O3"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
