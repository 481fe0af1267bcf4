import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Compile the Cython core if possible; otherwise install the pure-Python fallback."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"janossy._core not built ({exc}); using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"janossy._core not built ({exc}); using pure-Python kernels")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("janossy._core", ["src/janossy/_core.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # Cython missing or the .pyx fails to translate
    warnings.warn(f"janossy._core not cythonized ({exc}); using pure-Python kernels")
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
