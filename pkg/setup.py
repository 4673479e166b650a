"""Build script: compiles the optional enumeration kernels.

The compiled extension is an accelerator only; if Cython or a C compiler is
unavailable the install proceeds and the package falls back to the pure-Python
kernels in ``pagecurve._enum_py``.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pagecurve._enumeration",
                ["src/pagecurve/_enumeration.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
