"""sphmult: desk-scale spherical Fourier analysis on products of rank-one
noncompact symmetric spaces.

Modules
-------
space      geometric parameters, densities, Cartan weights
specfun    Bessel kernels, c-function/Plancherel density, series coefficients
sphfn      spherical-function evaluators (eigen-solver / local / series)
transform  forward/inverse spherical transform, Abel transform, convolution
mult       tubes, singular weights, multiplier-condition norms
kernels    cutoffs, kernel pieces, contour routes, estimate battery
group      2x2 matrix model, decompositions, transference check
harness    product-operator experiments and suites
"""

from . import group, harness, kernels, mult, quadrules, reports, space, specfun, sphfn, transform
from .space import Exponent, ProductSpace, RankOneSpace

__version__ = "0.1.0"

__all__ = [
    "space", "specfun", "sphfn", "transform", "mult", "kernels", "group",
    "harness", "reports", "quadrules",
    "RankOneSpace", "ProductSpace", "Exponent",
    "__version__",
]
