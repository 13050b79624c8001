"""Third-order iterations for multiple roots, convergence-order estimates
and basin-of-attraction rendering."""

from .basins import GridSpec, classify_orbit, encode_image, render
from .convergence import acoc, coc, iterate, table1
from .methods import MethodSpec, asymptotic_error_constant, coefficients, step
from .problems import get_problem, problem_registry
from .scalar import make_scalar

__all__ = [
    "GridSpec",
    "MethodSpec",
    "acoc",
    "asymptotic_error_constant",
    "classify_orbit",
    "coc",
    "coefficients",
    "encode_image",
    "get_problem",
    "iterate",
    "make_scalar",
    "problem_registry",
    "render",
    "step",
    "table1",
]
