"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-Python fallback is
selected at import time), so a failed compile downgrades to a warning
instead of aborting the install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            warnings.warn(f"compiled kernels skipped ({exc}); using pure-Python backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernels skipped ({exc}); using pure-Python backend")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; using pure-Python backend")
        return []
    ext = Extension(
        "tailbounds._core",
        sources=["src/tailbounds/_core.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
