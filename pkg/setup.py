"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compilation downgrades to a pure-Python install
instead of aborting.  Build in place for development with

    python setup.py build_ext --inplace
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Allow the install to proceed when no C toolchain is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or Cython missing
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            "picpkit._ckernels could not be compiled (%s); "
            "falling back to the pure-Python kernels" % exc
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "picpkit._ckernels",
                ["src/picpkit/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
