"""Build script: compiles the optional vote-scan extension.

The extension is best-effort. If Cython or a C compiler is missing the
package installs anyway and genstop._kernels falls back to the pure-Python
scan at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/genstop/_kernels/_scan.pyx",
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - toolchain-dependent
    print(f"genstop: skipping compiled kernel ({exc}); pure-Python fallback will be used")

setup(ext_modules=ext_modules)
