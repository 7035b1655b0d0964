"""Build script: compiles the optional Cython kernels.

The compiled extension accelerates the solver inner loops and the influence
table construction.  It is strictly optional: if Cython or a C compiler is
missing, the package installs anyway and lapcut._kernels falls back to the
pure-numpy implementation at import time.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that downgrades compilation failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, broken toolchain, ...
            _warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            _warn(exc)


def _warn(exc):
    sys.stderr.write(
        "warning: building the compiled kernels failed (%s); "
        "installing with the pure-Python fallback\n" % (exc,)
    )


def make_extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        _warn(exc)
        return []
    ext = Extension(
        "lapcut._kernels._core",
        ["src/lapcut/_kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        # fp-contract off: the fallback and the compiled kernels must round
        # identically, so FMA contraction is disabled.
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=make_extensions(), cmdclass={"build_ext": OptionalBuildExt})
