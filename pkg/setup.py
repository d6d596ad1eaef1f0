"""Build script.

Compiles the optional speedup extension when Cython and a C compiler are
available; the package works without it (pure-Python kernels are selected at
import time), so the extension is marked optional.  Core metadata is repeated
here so setuptools versions without pyproject [project] support still produce
a complete install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "twlab.kernels._ckernels",
                ["src/twlab/kernels/_ckernels.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(
    name="twlab",
    version="0.1.0",
    package_dir={"": "src"},
    packages=["twlab", "twlab.kernels"],
    entry_points={"console_scripts": ["twlab = twlab.cli:main"]},
    python_requires=">=3.10",
    ext_modules=ext_modules,
)
