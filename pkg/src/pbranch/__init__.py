"""Partition complexes, Young subgroup actions and the branching rule, by exact computation."""

from .errors import PbranchError, ResourceError, UsageError
from .partitions import SetPartition, PartitionPoset, enumerate_partitions
from .permgroups import Permutation, PermGroup, parse_group
from .simplicial import SimplicialComplex
from .homology import HomologySummary, reduced_homology
from .freelie import witt, hall_basis, branching_matrix, verify_branching
from .barcelo import barcelo_rank_check
from .collapse import verify_collapse_iso, verify_main_theorem
from .fixedpoints import verify_fixed_predictions
from .quotients import quotient_block, young_quotient_homology

__all__ = [
    "PbranchError",
    "ResourceError",
    "UsageError",
    "SetPartition",
    "PartitionPoset",
    "enumerate_partitions",
    "Permutation",
    "PermGroup",
    "parse_group",
    "SimplicialComplex",
    "HomologySummary",
    "reduced_homology",
    "witt",
    "hall_basis",
    "branching_matrix",
    "verify_branching",
    "barcelo_rank_check",
    "verify_collapse_iso",
    "verify_main_theorem",
    "verify_fixed_predictions",
    "quotient_block",
    "young_quotient_homology",
]

__version__ = "0.1.0"
