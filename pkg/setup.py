"""Build script for the optional compiled search kernel.

The package works without the extension: gf2gdd.kernels falls back to a
pure-Python implementation when the compiled module is absent.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    core = Extension(
        "gf2gdd.kernels._core",
        sources=["src/gf2gdd/kernels/_core.pyx"],
        extra_compile_args=["-O3"],
    )
    core.optional = True  # missing toolchain must not break the install
    ext_modules = cythonize([core], language_level="3")

setup(ext_modules=ext_modules)
