import os

import numpy as np
from setuptools import setup
from setuptools.extension import Extension

ext_modules = []
if os.environ.get("DIRICHLET_FORGE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python fallback is used at import time
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "dirichlet_forge._ckernels",
                    ["src/dirichlet_forge/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
