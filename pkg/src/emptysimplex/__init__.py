"""Empty lattice simplices P(a_1, ..., a_{k-1}, m): IDP, toric Gröbner bases, triangulations."""

from .errors import (
    DegenerateSimplexError,
    EmptySimplexError,
    ParameterError,
    ResourceLimitError,
    WitnessError,
)
from .family import FamilyParams, build_simplex, idp_check, w_points
from .lattice import LatticeSimplex, delta_polynomial, enumerate_dilation_points

__version__ = "0.1.0"

__all__ = [
    "DegenerateSimplexError", "EmptySimplexError", "ParameterError", "ResourceLimitError", "WitnessError",
    "FamilyParams", "build_simplex", "idp_check", "w_points",
    "LatticeSimplex", "delta_polynomial", "enumerate_dilation_points",
]
