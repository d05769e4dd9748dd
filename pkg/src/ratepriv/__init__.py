"""ratepriv: finite-alphabet privacy-utility tradeoff toolkit.

Computes the rate-privacy function (max I(Y;Z) over filters P_{Z|Y} with
I(X;Z) <= eps), the perfect-privacy value g_0 via polytope vertex
enumeration, the private/non-private information decomposition of Y with
respect to X, seeded upper bounds on Wyner common information and common
entropy, and the multi-letter near-uniform binning construction - all by
exact desk-scale computation with brute-force oracles alongside.
"""
from ._backend import BACKEND
from .errors import AlphabetMismatchError, InstanceTooLargeError, ValidationError
from .filters import FilterEvaluation, PrivacyFilter, evaluate_filter, filter_from_function
from .multiletter import (
    BinningPlan,
    BinningReport,
    build_bins,
    ml_decode,
    ml_decode_all,
    multiletter_evaluate,
    product_distribution,
)
from .perfect import (
    PolytopeVertexSet,
    RatePrivacyPoint,
    WeakIndependenceReport,
    d0_vertices,
    g0,
    is_weakly_independent,
)
from .privateinfo import (
    CommonInfoBundle,
    Decomposition,
    Partition,
    c_x_oracle,
    common_entropy_upper,
    common_info_bundle,
    decompose,
    distinct_posteriors,
    dpi_check,
    exact_generation_check,
    gacs_korner,
    sufficient_statistic,
    wyner_ci_upper,
)
from .prob import (
    JointDistribution,
    Kernel,
    Pmf,
    binary_entropy,
    conditional_min_entropy,
    entropy,
    joint_entropy,
    mutual_information,
    posterior_kernel,
    total_variation,
)
from .tradeoff import (
    TradeoffCurve,
    g_eps_curve,
    g_eps_deterministic,
    g_eps_oracle,
    g_eps_solve,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AlphabetMismatchError",
    "InstanceTooLargeError",
    "ValidationError",
    "FilterEvaluation",
    "PrivacyFilter",
    "evaluate_filter",
    "filter_from_function",
    "BinningPlan",
    "BinningReport",
    "build_bins",
    "ml_decode",
    "ml_decode_all",
    "multiletter_evaluate",
    "product_distribution",
    "PolytopeVertexSet",
    "RatePrivacyPoint",
    "WeakIndependenceReport",
    "d0_vertices",
    "g0",
    "is_weakly_independent",
    "CommonInfoBundle",
    "Decomposition",
    "Partition",
    "c_x_oracle",
    "common_entropy_upper",
    "common_info_bundle",
    "decompose",
    "distinct_posteriors",
    "dpi_check",
    "exact_generation_check",
    "gacs_korner",
    "sufficient_statistic",
    "wyner_ci_upper",
    "JointDistribution",
    "Kernel",
    "Pmf",
    "binary_entropy",
    "conditional_min_entropy",
    "entropy",
    "joint_entropy",
    "mutual_information",
    "posterior_kernel",
    "total_variation",
    "TradeoffCurve",
    "g_eps_curve",
    "g_eps_deterministic",
    "g_eps_oracle",
    "g_eps_solve",
]
