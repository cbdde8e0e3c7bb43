from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension("glfq._ckernels", ["src/glfq/_ckernels.pyx"])],
        language_level=3,
    )
except ImportError:
    # No Cython: install pure-Python only, glfq.kernels falls back at import.
    ext_modules = []

setup(ext_modules=ext_modules)
