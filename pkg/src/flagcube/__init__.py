"""Flag sum-of-squares certificates on the edge hypercube."""

from flagcube.qpoly import SquareFreePolynomial, CubePoint

__all__ = ["SquareFreePolynomial", "CubePoint"]
__version__ = "0.1.0"
