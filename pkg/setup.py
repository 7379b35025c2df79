"""Build script for the compiled alignment kernels.

The package works without the extension (a pure-Python fallback is selected
at import time), so a missing Cython toolchain degrades gracefully instead of
failing the install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "diaralign.msa._kernels",
                ["src/diaralign/msa/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
