from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("drivebench.traffic._kernel", ["src/drivebench/traffic/_kernel.pyx"])],
        language_level=3,
    )
except ImportError:
    # No Cython: install pure-Python only, the stepping backend falls back.
    ext_modules = []

setup(ext_modules=ext_modules)
