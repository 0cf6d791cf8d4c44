"""fracsob: numerical checks for fractional Sobolev fields on the torus.

Modules
-------
field      grids, sampled fields, norms, gradients, serialization
sobolev    Gagliardo seminorms, dual negative seminorms, rate fitting
spectral   Fourier multiplier operators and harmonic extension
mollify    bump mollification, convergence rates, product commutators
jacobian   pointwise and distributional Jacobians, winding degree
geometry   pullback metrics, second fundamental forms, developability
hodge      two-dimensional Hodge splitting and determinant estimates
abscont    fractional absolute continuity and box-counting content
cli        command line entry points
"""

from fracsob._kernels import HAVE_COMPILED
from fracsob.field import (
    FracIndex,
    Grid2D,
    ScalarField,
    VectorField,
    gradient,
    load_field,
    lp_norm,
    sample,
    sample_vector,
    save_field,
)

__version__ = "0.1.0"

__all__ = [
    "FracIndex",
    "HAVE_COMPILED",
    "Grid2D",
    "ScalarField",
    "VectorField",
    "gradient",
    "load_field",
    "lp_norm",
    "sample",
    "sample_vector",
    "save_field",
    "__version__",
]
