"""Build script: compiles the optional firing-kernel extension.

The package is fully functional without the extension; a pure-Python
kernel is selected at import time when the compiled module is missing.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/xnet/petri/_accel.pyx"],
        language_level="3",
        compiler_directives={"boundscheck": False, "wraparound": False},
    )
except ImportError:
    warnings.warn("Cython not available; building without the compiled kernel")


class OptionalBuildExt(build_ext):
    """Treat extension build failures as non-fatal (pure-Python fallback)."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"skipping compiled kernel: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping compiled kernel {ext.name}: {exc}")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
