"""Kernel decompositions of rational boundary data on quadrature domains."""

from .circle import BivariateRational, CircleDecomposition
from .cpoly import ComplexPoly, PartialFractions, RationalFunction, conj_reflect, partial_fractions, roots
from .decomp import Decomposition, DtnImage, convert, decompose, dirichlet_solve, dtn, extend_to_double
from .errors import QuaddecError
from .kernels import KernelTerm
from .qdomain import ImplicitCurve, QuadratureDomain, boundary_description

__version__ = "0.1.0"

__all__ = [
    "BivariateRational",
    "CircleDecomposition",
    "ComplexPoly",
    "Decomposition",
    "DtnImage",
    "ImplicitCurve",
    "KernelTerm",
    "PartialFractions",
    "QuadratureDomain",
    "QuaddecError",
    "RationalFunction",
    "boundary_description",
    "conj_reflect",
    "convert",
    "decompose",
    "dirichlet_solve",
    "dtn",
    "extend_to_double",
    "partial_fractions",
    "roots",
]
