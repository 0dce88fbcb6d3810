"""Build script: compiles the optional exponential-sum kernel.

The package is fully functional without the compiled extension; the
import-time backend selection in deltasum._backend falls back to the pure
Python kernel when the build is unavailable.
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
                "deltasum._backend._ckernel",
                ["src/deltasum/_backend/_ckernel.pyx"],
                # keep separate libm cos/sin calls and strict IEEE evaluation
                # so the compiled kernel matches the pure backend bit for bit
                extra_compile_args=[
                    "-fno-builtin-cos",
                    "-fno-builtin-sin",
                    "-ffp-contract=off",
                ],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
