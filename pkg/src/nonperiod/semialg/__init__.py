"""Volumes of bounded basic open semi-algebraic domains by certified Riemann sums."""

from .bernstein import bernstein_coefficients
from .polynomial import BasicDomain, DomainFormatError, GridCube, IntPolynomial, load_domain, save_domain
from .volume import (
    Certificate,
    NoConvergenceAtBudget,
    Verdict,
    approximate_volume,
    classify_grid,
    cube_contained,
    riemann_volume,
)

__all__ = [
    "BasicDomain",
    "Certificate",
    "DomainFormatError",
    "GridCube",
    "IntPolynomial",
    "NoConvergenceAtBudget",
    "Verdict",
    "approximate_volume",
    "bernstein_coefficients",
    "classify_grid",
    "cube_contained",
    "load_domain",
    "riemann_volume",
    "save_domain",
]
