"""Build the optional Cython kernels; the package falls back to numpy without them."""
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "benfordkit._ckernels",
                ["src/benfordkit/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    print("Cython/numpy unavailable at build time; installing pure-Python kernels only", file=sys.stderr)


class optional_build_ext(build_ext):
    """Compile failures degrade to the pure-Python kernels instead of aborting the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: skipping compiled kernels ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc})", file=sys.stderr)


setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
