"""Build script for the optional compiled percentile kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so a missing compiler or Cython only costs speed, not features.
Set CITIMPACT_SKIP_EXT=1 to skip the extension build explicitly.
"""

import os

from setuptools import Extension, setup

extensions = []
if not os.environ.get("CITIMPACT_SKIP_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extensions = cythonize(
            [
                Extension(
                    "citimpact._percentile_kernel",
                    ["src/citimpact/_percentile_kernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=extensions)
