"""Build script: compiles the Cython kernel extension when a toolchain is
available, otherwise installs with the pure-Python fallback only."""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Degrade to the pure-Python kernels if compilation fails."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain-dependent
            print(f"warning: compiled kernels unavailable ({exc}); "
                  "falling back to pure Python")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain-dependent
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "falling back to pure Python")


def extensions():
    if os.environ.get("RMPROD_SKIP_NATIVE"):
        return []
    from Cython.Build import cythonize
    from setuptools import Extension

    ext = Extension("rmprod._kernels._native",
                    ["src/rmprod/_kernels/_native.pyx"])
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
