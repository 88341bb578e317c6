"""Build script.

The compiled extension is optional: if Cython or a C compiler is missing,
the package installs anyway and falls back to the numpy implementation of
the simulation kernel at import time.
"""

from setuptools import setup


def extensions():
    try:
        from Cython.Build import cythonize
        import numpy
    except ImportError:
        return []
    try:
        return cythonize(
            [
                # declared inline to avoid importing the package during build
                _extension(numpy),
            ],
            language_level="3",
        )
    except Exception:
        return []


def _extension(numpy):
    from setuptools import Extension

    return Extension(
        "longcycle._kernel",
        sources=["src/longcycle/_kernel.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )


setup(ext_modules=extensions())
