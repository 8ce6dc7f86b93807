import os

from setuptools import Extension, setup

# The compiled scan kernel is optional: without Cython (or with
# WITWORLD_NO_EXT set) the package falls back to the numpy kernel.
ext_modules = []
if not os.environ.get("WITWORLD_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "witworld._kernels._scan_cy",
                    ["src/witworld/_kernels/_scan_cy.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
