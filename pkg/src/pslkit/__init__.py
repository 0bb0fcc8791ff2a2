"""pslkit: aperiodic autocorrelation and peak sidelobe level toolkit.

Computes correlation profiles of {-1,+1} sequences three interchangeable
ways, searches and enumerates minimum peak sidelobe levels exactly,
counts even tuples against their closed-form bounds, and runs
reproducible Monte Carlo against exact and analytic references.

All logarithms are natural logarithms, package-wide.
"""

__version__ = "0.1.0"

from .seqcore import (
    BinarySequence,
    BudgetExceededError,
    CorrelationMeasureResult,
    CorrelationProfile,
    SequenceParseError,
    acf,
    acf_bitparallel,
    acf_fft,
    acf_naive,
    correlation_measure,
    parse_sequence,
    psl,
)
from .combin import (
    MomentReport,
    bound_even_single,
    bound_moment,
    bound_S,
    count_even_tuples,
    count_S,
    double_factorial,
    exact_moment_sequences,
    exact_moment_tuples,
    is_even_tuple,
    moment_report,
    partition_T,
)
from .bounds import (
    SQRT2,
    ThresholdSet,
    cramer_ratio,
    expectation_lower,
    gaussian_sandwich,
    lambda_n,
    lower_bound_single,
    markov_joint_bound,
    mcdiarmid_bound,
    phi_tail,
    pm1_tail,
    psl_tail_lower,
    stirling_log_bounds,
    upper_bound_joint,
    xi_n,
)
from .exact import (
    ExactPslSummary,
    exact_psl_distribution,
    exact_tail_joint,
    exact_tail_single,
    independence_check,
    joint_tail_table,
    min_psl,
)
from .montecarlo import (
    EmpiricalDistribution,
    SampleConfig,
    TailEstimate,
    concentration_profile,
    estimate_tail_joint,
    estimate_tail_single,
    psl_lower_event_rate,
    sample_psl_ratio,
    trend_report,
    wilson_interval,
)
