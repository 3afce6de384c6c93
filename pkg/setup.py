import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "rsa_variants._kernel",
                ["src/rsa_variants/_kernel.pyx"],
                include_dirs=["src/rsa_variants"],
                define_macros=[("SB_LIMB_BITS", os.environ.get("RSA_VARIANTS_LIMB_BITS", "32"))],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
