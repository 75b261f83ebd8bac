"""Exact property testing of monotone and Lipschitz functions on hypergrids."""
from .distance import ExactCaps, brute_force_distance, epsilon_f, max_weight_phi_matching, min_vertex_cover, repair
from .errors import GridTesterError, InstanceTooLarge, InvariantViolation, UndefinedArithmetic, UsageError
from .fileio import emit_function, parse_function, read_function, write_function
from .grid import Hypergrid, PairFamilyId
from .properties import PropertyParams, check_property, perturb, pseudo_distance
from .structure import verify_counts
from .table import FunctionTable, pad
from .tester import TesterConfig, Verdict, query_budget, run_tester
from .values import INF, NEG_INF, DualValue

__all__ = [
    "DualValue",
    "ExactCaps",
    "FunctionTable",
    "GridTesterError",
    "Hypergrid",
    "INF",
    "InstanceTooLarge",
    "InvariantViolation",
    "NEG_INF",
    "PairFamilyId",
    "PropertyParams",
    "TesterConfig",
    "UndefinedArithmetic",
    "UsageError",
    "Verdict",
    "brute_force_distance",
    "check_property",
    "emit_function",
    "epsilon_f",
    "max_weight_phi_matching",
    "min_vertex_cover",
    "pad",
    "parse_function",
    "perturb",
    "pseudo_distance",
    "query_budget",
    "read_function",
    "repair",
    "run_tester",
    "verify_counts",
    "write_function",
]
