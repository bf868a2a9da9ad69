"""Set-wise Kemeny rank aggregation: distances, medians, and the
pair-ordering theorems that shrink the median search space."""

from .distance import (
    AMBIGUOUS,
    kendall_tau_inversions,
    kwise_distance,
    max_kwise_distance,
    profile_distance,
    top_of_subset,
)
from .exceptions import (
    CycleError,
    InputError,
    ParseError,
    UnsupportedFormatError,
    ValidationError,
)
from .model import (
    AlternativeRegistry,
    ConstraintSet,
    Profile,
    Ranking,
    Vote,
    precedes,
)
from .preflib import parse, serialize
from .reduction import (
    EVERY_MEDIAN,
    SOME_MEDIAN,
    ReductionReport,
    always_3wise,
    at3_all,
    consecutive_pair_check,
    consensus_levels,
    mot2_certify_pair,
    mot2_iterated_improved,
    mot2_single,
    mot3_certify_all,
    mot3_certify_pair,
    mot3_equality,
    mot3_iterated,
    mot3_single,
    mote3_all,
    reduction_rate_bound,
    run_method,
)
from .simulate import (
    DEFAULT_SEED,
    SimulationConfig,
    SimulationResult,
    generate_uniform_profile,
    run_simulation,
)
from .solver import (
    MedianResult,
    brute_force_medians,
    constrained_medians,
    validate_median_candidate,
)
from .stats import (
    OrderStatistics,
    compute_statistics,
    count_chain,
    delta_sum_evaluator,
    p_value,
    q_value,
    r_value,
    s_matrix,
    s_value,
)

__version__ = "1.0.0"
