import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("REALMONO_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extensions = [
            Extension(
                "realmono._ckernels",
                ["src/realmono/_ckernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ]
        ext_modules = cythonize(
            extensions,
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
