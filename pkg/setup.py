"""Build script: compiles the Cython hot core when possible.

The package works without the extension (pure-Python kernels in
tilecast.backend._pycore); a failed compile therefore degrades the install
instead of breaking it. OpenMP is probed the same way: first try with it,
then without, then give up on the extension entirely.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions(with_openmp: bool):
    from Cython.Build import cythonize
    from setuptools import Extension

    # -ffp-contract=off (and no -ffast-math): the compiler must not fuse
    # a*b+c into FMA, or kernel results drift from the pure-Python backend,
    # which promises bit-identical frames.
    compile_args = ["-O2", "-ffp-contract=off"]
    link_args = []
    if with_openmp:
        compile_args.append("-fopenmp")
        link_args.append("-fopenmp")
    ext = Extension(
        "tilecast.backend._core",
        sources=["src/tilecast/backend/_core.pyx"],
        extra_compile_args=compile_args,
        extra_link_args=link_args,
    )
    return cythonize([ext], language_level=3)


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure degrades
            print(f"WARNING: extension build failed ({exc}); "
                  "falling back to pure-Python backend", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception:
            if "-fopenmp" in ext.extra_compile_args:
                print("WARNING: OpenMP unavailable, rebuilding extension "
                      "without it", file=sys.stderr)
                ext.extra_compile_args = [a for a in ext.extra_compile_args
                                          if a != "-fopenmp"]
                ext.extra_link_args = [a for a in ext.extra_link_args
                                       if a != "-fopenmp"]
                super().build_extension(ext)
            else:
                raise


if os.environ.get("TILECAST_PURE_PYTHON"):
    setup()
else:
    setup(
        ext_modules=_extensions(with_openmp=True),
        cmdclass={"build_ext": optional_build_ext},
    )
