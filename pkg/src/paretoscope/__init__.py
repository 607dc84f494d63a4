"""Exact-rational Pareto improvement checks, frontier enumeration, windfall
accumulation runs, and welfare rankings over finite allocation spaces.

Every quantity is a ``fractions.Fraction``; every enumeration is
deterministic; every optimized code path is shadowed by a naive oracle that
the test suite (and in the frontier's case, every call) holds it against.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .discovery import DiscoveryRun, simulate_discovery
from .engine import (
    DEFAULT_SCAN_CAP,
    EfficiencyVerdict,
    FrontierEntry,
    FrontierReport,
    ImprovementVerdict,
    Method,
    ScanReport,
    ViolationKind,
    check_improvement,
    check_improvement_neoclassical,
    check_improvement_ratio_form,
    enumerate_frontier,
    is_pareto_efficient,
    scan_all_moves,
    transforms_for,
)
from .errors import (
    CapExceeded,
    DimensionMismatch,
    HypothesisViolated,
    InfeasibleConfig,
    InfeasibleLattice,
    InternalInvariant,
    InvalidAgent,
    MissingField,
    ParetoscopeError,
    ParseError,
    ScenarioError,
    ValidationError,
    VectorValuedAgentInfo,
    ZeroReferencePoint,
)
from .polity import (
    Allocation,
    BoxGrid,
    Bundle,
    ExplicitList,
    FeasibleSet,
    FixedTotalLattice,
    Move,
    MoveClassification,
    PartialOrderResult,
    Polity,
    Quantity,
    alloc,
    as_quantity,
    classify_move_agents,
    compare_bundles,
    count_feasible,
    describe_feasible,
    enumerate_feasible,
    feasible_contains,
)
from .report import Report, emit_report, render_allocation, render_move
from .scenario import Scenario, load_scenario, parse_scenario
from .transforms import (
    OwnBundle,
    PreferenceInfo,
    RelativeToMean,
    RelativeToNeighborhood,
    Sign,
    SignReport,
    TransformSpec,
    WeightedOwn,
    aggregate,
    compare_info,
    cross_effect_sign,
    evaluate_transform,
    parse_transform,
    transform_label,
    verify_own_monotonicity,
)
from .welfare import (
    Maximin,
    RankEntry,
    Ranking,
    Sum,
    SwfSpec,
    WeightedSum,
    parse_swf,
    swf_label,
    welfare_rank,
    welfare_value,
)

__all__ = [
    "__version__",
    "Allocation",
    "BoxGrid",
    "Bundle",
    "CapExceeded",
    "DEFAULT_SCAN_CAP",
    "DimensionMismatch",
    "DiscoveryRun",
    "EfficiencyVerdict",
    "ExplicitList",
    "FeasibleSet",
    "FixedTotalLattice",
    "FrontierEntry",
    "FrontierReport",
    "HypothesisViolated",
    "ImprovementVerdict",
    "InfeasibleConfig",
    "InfeasibleLattice",
    "InternalInvariant",
    "InvalidAgent",
    "Maximin",
    "Method",
    "MissingField",
    "Move",
    "MoveClassification",
    "OwnBundle",
    "ParetoscopeError",
    "ParseError",
    "PartialOrderResult",
    "Polity",
    "PreferenceInfo",
    "Quantity",
    "RankEntry",
    "Ranking",
    "RelativeToMean",
    "RelativeToNeighborhood",
    "Report",
    "ScanReport",
    "Scenario",
    "ScenarioError",
    "Sign",
    "SignReport",
    "Sum",
    "SwfSpec",
    "TransformSpec",
    "ValidationError",
    "VectorValuedAgentInfo",
    "ViolationKind",
    "WeightedOwn",
    "WeightedSum",
    "ZeroReferencePoint",
    "aggregate",
    "alloc",
    "as_quantity",
    "check_improvement",
    "check_improvement_neoclassical",
    "check_improvement_ratio_form",
    "classify_move_agents",
    "compare_bundles",
    "compare_info",
    "count_feasible",
    "cross_effect_sign",
    "describe_feasible",
    "emit_report",
    "enumerate_feasible",
    "enumerate_frontier",
    "evaluate_transform",
    "feasible_contains",
    "is_pareto_efficient",
    "load_scenario",
    "parse_scenario",
    "parse_swf",
    "parse_transform",
    "render_allocation",
    "render_move",
    "scan_all_moves",
    "simulate_discovery",
    "swf_label",
    "transform_label",
    "transforms_for",
    "verify_own_monotonicity",
    "welfare_rank",
    "welfare_value",
]
