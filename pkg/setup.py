from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/nttmul/_kernels.pyx",
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
except ImportError:
    # Without Cython the package still installs; the pure-Python kernel
    # twin is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
