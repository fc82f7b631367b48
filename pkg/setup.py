"""Build script for the compiled rating kernels.

The extension is optional: when Cython or a C compiler is unavailable the
package installs anyway and falls back to the pure-Python kernels at import.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "rank_forge._core",
        ["src/rank_forge/_core.pyx"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
    if cythonize is not None
    else [],
)
