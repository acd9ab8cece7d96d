"""Build hook for the optional compiled kernel.

Without Cython or a C compiler the package still installs and uses the
pure-Python kernel.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("artifact._ckernel", ["src/artifact/_ckernel.pyx"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except Exception:  # pragma: no cover - build environment without Cython
    ext_modules = []

setup(ext_modules=ext_modules)
