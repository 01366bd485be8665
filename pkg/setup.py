import os

from setuptools import setup

ext_modules = []
if not os.environ.get("MFCONTROL_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("mfcontrol._kernel", ["src/mfcontrol/_kernel.pyx"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )
    except ImportError:
        # pure-Python fallback in mfcontrol._kernel_py is used instead
        ext_modules = []

setup(ext_modules=ext_modules)
