"""Characteristic-2 rank-2 Frobenius link homologies, their base changes and spectral sequences."""

from . import linalg
from .complex import GradedFreeComplex, build_complex
from .diagram import LinkDiagram, connected_sum, from_braid, parse_pd
from .frobenius import SYSTEMS, FrobeniusSystem, get_system
from .homology import compute_homology
from .rings import CONSTANTS, LaurentPoly, RingDescriptor
from .table import load_table

__version__ = "0.1.0"
ENGINE_VERSION = __version__

__all__ = [
    "CONSTANTS", "ENGINE_VERSION", "FrobeniusSystem", "GradedFreeComplex", "LaurentPoly", "LinkDiagram",
    "RingDescriptor", "SYSTEMS", "build_complex", "compute_homology", "connected_sum", "from_braid",
    "get_system", "linalg", "load_table", "parse_pd",
]
