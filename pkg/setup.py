"""Build script: compiles the optional split-search extension.

The package works without the extension (a pure-Python kernel is selected at
import time), so compilation failures are tolerated. Set RANSOMRISK_SKIP_EXT=1
to skip the native build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("RANSOMRISK_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "ransomrisk.forest._split_cy",
                    ["src/ransomrisk/forest/_split_cy.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
