"""Build script for the optional compiled chrF statistics kernel.

The package is fully functional without the extension: charmt.metrics falls
back to the pure-Python kernel at import time. The extension is marked
optional so installation succeeds on hosts without a C++ toolchain.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    ext = Extension(
        "charmt.metrics._stats_fast",
        ["src/charmt/metrics/_stats_fast.pyx"],
        language="c++",
        extra_compile_args=["-O2", "-std=c++11"],
    )
    ext.optional = True
    extensions = cythonize(ext, compiler_directives={"language_level": "3"})

setup(ext_modules=extensions)
