import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the pure numpy
# implementation when the extension is unavailable.
extensions = [
    Extension(
        "multitangent._kernels_cy",
        ["src/multitangent/_kernels_cy.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
