"""Build script for the optional compiled kernels.

The package works without the extensions (pure-Python fallbacks are selected
at import time); compilation failures therefore do not abort the install.
"""

import sys

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "legaltopics._kernels._edit_c",
                ["src/legaltopics/_kernels/_edit_c.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            ),
            Extension(
                "legaltopics._kernels._layout_c",
                ["src/legaltopics/_kernels/_layout_c.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            ),
        ],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"skipping compiled kernels ({exc}); pure-Python fallback will be used",
          file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
