"""Builds the optional compiled kernel; installation proceeds without it if Cython or a compiler is missing."""
from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as e:  # no compiler: the pure-Python fallback is used
            print(f"warning: compiled kernel not built ({e})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as e:
            print(f"warning: compiled kernel {ext.name} not built ({e})")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/toriclift/_kernels.pyx"],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
