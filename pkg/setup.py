"""Build script for the optional compiled Gibbs kernel.

The package works without the extension (a numpy fallback is selected at
import time); set MIXMLE_NO_EXT=1 to skip compilation entirely.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, otherwise warn and continue."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "WARNING: compiled Gibbs kernel not built (%s); "
            "the pure numpy backend will be used." % exc,
            file=sys.stderr,
        )


ext_modules = []
cmdclass = {}
if os.environ.get("MIXMLE_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext = Extension(
            "mixmle._gibbs_cy",
            ["src/mixmle/_gibbs_cy.pyx"],
            include_dirs=[np.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            extra_compile_args=["-O3"],
        )
        ext_modules = cythonize([ext], language_level=3)
        cmdclass = {"build_ext": OptionalBuildExt}
    except ImportError as exc:
        print("WARNING: Cython/numpy unavailable (%s); skipping extension." % exc,
              file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass=cmdclass)
