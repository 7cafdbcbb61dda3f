"""Exact fusion rings of the triplet W-algebra W(p+, p-)."""

from .catalog import AlgebraParams, enumerate_basis, parse_label, validate_params
from .fusion_engine import build_generator_action, fuse, structure_constants, verify_engine
from .grothendieck import gr, kfuse, verify_K

__all__ = [
    "AlgebraParams",
    "build_generator_action",
    "enumerate_basis",
    "fuse",
    "gr",
    "kfuse",
    "parse_label",
    "structure_constants",
    "validate_params",
    "verify_K",
    "verify_engine",
]
