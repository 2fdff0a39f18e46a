"""Build script: compiles the Cython stage-simulation kernel when possible.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile is downgraded to a warning.
"""

import sys

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = cythonize(
        [
            Extension(
                "reactorq._kernels._speedups",
                ["src/reactorq/_kernels/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"warning: Cython extension skipped ({exc}); "
          "pure-Python kernels will be used", file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
