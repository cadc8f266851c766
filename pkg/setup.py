"""Build script: compiles the optional C accelerator for the term kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so any failure here downgrades to a pure build instead of
aborting the install.
"""

import sys

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "qhomfly._ckernel",
                ["src/qhomfly/_ckernel.pyx"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # no Cython or no compiler: install pure
    print(f"skipping compiled kernel ({exc})", file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
