"""Small-cancellation tools for relator families over free products of finite groups."""

from .cancellation import PieceReport, VerificationParams, max_common_piece, ratio_scan, verify_metric
from .construct import (
    ConstructionError,
    ConstructionParams,
    FamilyMemberSpec,
    Presentation,
    TheoremBSpec,
    build_theorem_a,
    build_theorem_b,
    corollary_a_family,
    find_min_n,
    member,
    predicted_lengths,
)
from .dehn import (
    DehnSolver,
    check_factor_embedding,
    check_generation,
    dehn_reduce,
    is_trivial,
    oracle_is_trivial,
)
from .freeprod import FactorFamily, Letter, Word, parse_word
from .groups import GroupTable, alternating_group, cyclic_group, default_host
from .symmetrize import SymmetrizedSet, symmetrized_closure

__all__ = [
    "ConstructionError", "ConstructionParams", "DehnSolver", "FactorFamily", "FamilyMemberSpec",
    "GroupTable", "Letter", "PieceReport", "Presentation", "SymmetrizedSet", "TheoremBSpec",
    "VerificationParams", "Word", "alternating_group", "build_theorem_a", "build_theorem_b",
    "check_factor_embedding", "check_generation", "corollary_a_family", "cyclic_group",
    "default_host", "dehn_reduce", "find_min_n", "is_trivial", "max_common_piece", "member",
    "oracle_is_trivial", "parse_word", "predicted_lengths", "ratio_scan", "symmetrized_closure",
    "verify_metric",
]
