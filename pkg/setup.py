"""Build hook for the optional compiled kernels; metadata lives in pyproject.toml."""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:  # numpy or Cython missing: the pure-Python kernels are used
    pass
else:
    ext_modules = cythonize(
        [
            Extension(
                "hnflow.kernels._ckernels",
                ["src/hnflow/kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
