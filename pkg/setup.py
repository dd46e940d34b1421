"""Build script: compiles the optional arithmetic kernel.

The package works without the extension (pure-Python fallback in
iwrank._kernels_pure); the build therefore tolerates a missing compiler
or Cython and simply skips the extension.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/iwrank/_kernels.pyx"],
        compiler_directives={"language_level": 3, "boundscheck": False},
    )
except Exception as exc:  # pragma: no cover - environment dependent
    print(f"iwrank: building without compiled kernel ({exc})")

setup(ext_modules=ext_modules)
