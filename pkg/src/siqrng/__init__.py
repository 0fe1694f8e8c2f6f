"""Source-independent certification and extraction of quantum randomness.

The package turns raw detector click statistics into a certified lower
bound on extractable random bits.  The measurement record is squashed
into probability intervals, worst-cased over everything the source side
could have prepared, tightened by statistical fluctuation terms, and
converted through a coherence estimate into a finite-size min-entropy
bound.  A Toeplitz extractor then distills the certified bits.

Layout:

    qubit        single-qubit tomograms, entropies, coherence, witnesses
    bounds       asymptotic rates and the finite-size min-entropy bound
    acquisition  click records, squashing, worst-case and fluctuation steps
    detector     optical threshold-detector model (closed form and Monte Carlo)
    optimizer    grid search over intensity and basis bias
    extractor    Toeplitz hashing and bit-file handling
    cli          the ``siqrng`` command
"""

from .acquisition import (
    BasisCounts,
    ClickRecord,
    EpsilonBudget,
    IncompatibleCountsError,
    NoBasisDataError,
    ProbabilityBounds,
    assignment_prob,
    double_click_cost_assignment,
    double_click_cost_discard,
    fluctuation_adjust,
    hoeffding_theta,
    parse_counts,
    read_counts,
    squash_bounds,
    squash_interval,
    worst_case_prob,
    write_counts,
)
from .bounds import (
    MIN_ENTROPY_COEFF,
    RateReport,
    assemble_rate_report,
    finite_size_floor,
    min_entropy_bound,
    smoothing_log_term,
    tomo_rate_asymptotic,
    witness_rate_asymptotic,
)
from .detector import (
    ClickStats,
    ExperimentConfig,
    WorstCaseProbs,
    analytic_click_stats,
    double_click_prob,
    mc_sample,
    simulated_worst_probs,
)
from .extractor import (
    ToeplitzSpec,
    output_length,
    pack_bits,
    read_bits,
    toeplitz_extract,
    toeplitz_matrix,
    unpack_bits,
    write_bits,
)
from .optimizer import OptimizationResult, optimize, rate_objective, rate_surface
from .qubit import (
    NonphysicalStateError,
    QubitTomogram,
    binary_entropy,
    coherence_rel_entropy,
    shannon_entropy,
    von_neumann_entropy,
    witness_coherence_bound,
    witness_value,
)

__version__ = "0.1.0"

__all__ = [
    "BasisCounts",
    "ClickRecord",
    "ClickStats",
    "EpsilonBudget",
    "ExperimentConfig",
    "IncompatibleCountsError",
    "MIN_ENTROPY_COEFF",
    "NoBasisDataError",
    "NonphysicalStateError",
    "OptimizationResult",
    "ProbabilityBounds",
    "QubitTomogram",
    "RateReport",
    "ToeplitzSpec",
    "WorstCaseProbs",
    "analytic_click_stats",
    "assemble_rate_report",
    "assignment_prob",
    "binary_entropy",
    "coherence_rel_entropy",
    "double_click_cost_assignment",
    "double_click_cost_discard",
    "double_click_prob",
    "finite_size_floor",
    "fluctuation_adjust",
    "hoeffding_theta",
    "mc_sample",
    "min_entropy_bound",
    "optimize",
    "output_length",
    "pack_bits",
    "parse_counts",
    "rate_objective",
    "rate_surface",
    "read_bits",
    "read_counts",
    "shannon_entropy",
    "simulated_worst_probs",
    "smoothing_log_term",
    "squash_bounds",
    "squash_interval",
    "toeplitz_extract",
    "toeplitz_matrix",
    "tomo_rate_asymptotic",
    "unpack_bits",
    "von_neumann_entropy",
    "witness_coherence_bound",
    "witness_rate_asymptotic",
    "witness_value",
    "worst_case_prob",
    "write_bits",
    "write_counts",
]
