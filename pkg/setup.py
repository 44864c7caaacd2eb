"""Build script for the optional compiled kernel.

If Cython, gmpy2 headers or libgmp are missing the extension is skipped and
the package runs on the pure-Python kernel.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import gmpy2
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "plgroups._ckernel",
        ["src/plgroups/_ckernel.pyx"],
        include_dirs=[os.path.dirname(gmpy2.__file__)],
        libraries=["gmp"],
        extra_compile_args=["-O3"],
    )
    try:
        return cythonize([ext], compiler_directives={"language_level": "3"}, quiet=True)
    except Exception as exc:  # noqa: BLE001
        print(f"warning: cythonize failed ({exc}); using pure-Python kernel")
        return []


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernel not built ({exc}); using pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: {ext.name} not built ({exc}); using pure-Python kernel")


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
