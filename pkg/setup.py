from setuptools import Extension, setup
from Cython.Build import cythonize

# No -ffast-math / -march=native: the compiled backend must produce output
# bit-identical to the pure-Python backend (same IEEE-754 operations).
setup(
    ext_modules=cythonize(
        [
            Extension(
                "cnncipher._speed",
                ["src/cnncipher/_speed.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
)
