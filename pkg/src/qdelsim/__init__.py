"""Simulation of quantum multi-deletion codes built from quantum Reed-Solomon codes."""

from .css_qrs import ErasureRecovery, QRSCode, erase_blocks
from .deletion import DeletionPattern, delete, delete_multi
from .errors import (
    CapabilityError,
    ConfigurationError,
    ConstructionError,
    DecodeFailure,
    IntegrityError,
    NumericalError,
    QDelSimError,
)
from .finite_field import FieldElement, FieldSpec, gf
from .pipeline import (
    DeletionCode,
    ExperimentConfig,
    RateQuery,
    TrialReport,
    code_rate,
    dec,
    enc,
    qrs_rate,
    rate_table,
    verify_recovery,
)
from .reed_solomon import RSCodePair, RSParams, build_pair
from .sandwich import AsmLayout, LocOutput, asm, loc
from .state import SparseDensity, SparseKet, partial_trace, tensor, trace_distance

__all__ = [
    "AsmLayout",
    "CapabilityError",
    "ConfigurationError",
    "ConstructionError",
    "DecodeFailure",
    "DeletionCode",
    "DeletionPattern",
    "ErasureRecovery",
    "ExperimentConfig",
    "FieldElement",
    "FieldSpec",
    "IntegrityError",
    "LocOutput",
    "NumericalError",
    "QDelSimError",
    "QRSCode",
    "RSCodePair",
    "RSParams",
    "RateQuery",
    "SparseDensity",
    "SparseKet",
    "TrialReport",
    "asm",
    "build_pair",
    "code_rate",
    "dec",
    "delete",
    "delete_multi",
    "enc",
    "erase_blocks",
    "gf",
    "loc",
    "partial_trace",
    "qrs_rate",
    "rate_table",
    "tensor",
    "trace_distance",
    "verify_recovery",
]

__version__ = "0.1.0"
