"""Build the optional Cython kernels; the package runs without them."""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("ZETAINDEP_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("zetaindep._ckernels", ["src/zetaindep/_ckernels.pyx"])],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
