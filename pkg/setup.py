from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps the compiled kernels bit-identical to the pure
# Python backend (no fused multiply-add); do not add -ffast-math.
extensions = [
    Extension(
        "dfinteract.geometry._udf_cy",
        ["src/dfinteract/geometry/_udf_cy.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
        annotate=False,
    )
)
