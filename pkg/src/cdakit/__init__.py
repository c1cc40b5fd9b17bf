"""Constrained covering, locating and detecting arrays for combinatorial
interaction testing."""

from .cca import cca_upper_bound, generate_cca
from .cda_heuristic import build_diffrows, generate_heuristic_cda
from .cda_sat import build_exist_cda, generate_min_cda
from .constraints import check_unmasking, complete, get_oracle, solve
from .interactions import (
    compute_universe,
    covers,
    enumerate_valid,
    interaction,
    is_independent,
    is_masking,
    rho,
    tau,
)
from .localize import Outcome, Verdict, annotate, identify, run_tests
from .model import (
    DSLSyntaxError,
    ModelError,
    Parameter,
    SutModel,
    TestArray,
    UnsatisfiableModelError,
    format_model,
    load_model,
    parse_model,
    validate_model,
)
from .report import GenerationReport, analyze
from .verify import (
    AT_MOST_BOTH,
    AT_MOST_D,
    AT_MOST_T,
    EXACT,
    Variant,
    Violation,
    check_cca,
    check_cda,
    check_cla,
    distinguishable,
    is_cca,
    is_cda,
    is_cla,
    theorem_oracles,
)

__version__ = "0.1.0"
