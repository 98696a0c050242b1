"""Finite-truncation models of the quantum disc, quantum SU(2) and their twisted Dirac operators."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .disc import DiscElement, CircleElement, make_generator, mul, star, sigma, symbol, to_matrix
from .l2 import L2Vector, integrate, inner, lmul, rmul
from .calculus import TwistedDerivation, leibniz_residual
from .su2 import SU2Element, generators, rho_tilde
from .dirac import DiracConfig, assemble_dirac, spectrum, twisted_commutator
from .expr import parse, evaluate, to_text
from .errors import (
    QDiracError, ParameterError, UnboundedSymbolError, DivergenceError, DomainError,
    ConfigError, SizeError, ParseError,
)

__all__ = [
    "DiscElement", "CircleElement", "make_generator", "mul", "star", "sigma", "symbol", "to_matrix",
    "L2Vector", "integrate", "inner", "lmul", "rmul",
    "TwistedDerivation", "leibniz_residual",
    "SU2Element", "generators", "rho_tilde",
    "DiracConfig", "assemble_dirac", "spectrum", "twisted_commutator",
    "parse", "evaluate", "to_text",
    "QDiracError", "ParameterError", "UnboundedSymbolError", "DivergenceError", "DomainError",
    "ConfigError", "SizeError", "ParseError",
]
