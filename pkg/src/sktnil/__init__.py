"""Exact verification and construction of SKT Hermitian structures on nilpotent Lie algebras."""

from .bismut import SktVerdict, ce_differential, dc_direct, is_skt, torsion_three_form
from .compose import CompositionSpec, certify_irreducible, compose, iterate_compose
from .errors import PreconditionError, SKTError, ValidationError
from .fileio import parse_algebra, read_algebra, serialize_algebra, write_algebra
from .forms import AlternatingForm
from .hermitian import ComplexStructure, HermitianTriple, Metric
from .liealg import LieAlgebra

__version__ = "0.1.0"

__all__ = [
    "AlternatingForm",
    "ComplexStructure",
    "CompositionSpec",
    "HermitianTriple",
    "LieAlgebra",
    "Metric",
    "PreconditionError",
    "SKTError",
    "SktVerdict",
    "ValidationError",
    "ce_differential",
    "certify_irreducible",
    "compose",
    "dc_direct",
    "is_skt",
    "iterate_compose",
    "parse_algebra",
    "read_algebra",
    "serialize_algebra",
    "torsion_three_form",
    "write_algebra",
]
