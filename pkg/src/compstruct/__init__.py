"""Executable computable-structure machinery: lazy presentations, composites,
the hypercube H, coded orders, and oracle-mediated isomorphism transfers."""

from .core import (
    BlockRotation,
    FinitePresentation,
    Fuel,
    FuelExhausted,
    InvariantViolation,
    LazyIso,
    LimitExceeded,
    OracleSession,
    Presentation,
    RelationSymbol,
    Signature,
    StructureError,
    TagMismatch,
    TaggedCopy,
    brute_force_isomorphisms,
    decode_pair,
    encode_pair,
    restrict_to_elements,
    restrict_to_finite,
    retag_copy,
)

__version__ = "0.1.0"
