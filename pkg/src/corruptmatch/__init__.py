"""Graph matching under node corruption.

Samplers for correlated and corrupted graph pairs, the information-theoretic
estimators with their analysis machinery, feasible baseline matchers,
closed-form threshold oracles, and a reproducible Monte-Carlo harness.
"""

__version__ = "0.1.0"

from .errors import (
    ComputationError,
    CorruptMatchError,
    EmptyDomainError,
    ParameterError,
    SchemaError,
    SizeLimitError,
)
from .graphs import (
    CorrelatedPair,
    Graph,
    IntersectionGraph,
    Matching,
    Permutation,
    apply_permutation,
    intersection_graph,
    matching_from_json,
    matching_to_json,
    overlap,
    precision,
    read_edgelist,
    sample_cer,
    sample_cer_identity,
    sample_er,
    write_edgelist,
)
from .corruption import (
    CorruptedInstance,
    CorruptionParams,
    adversary_imitation,
    adversary_overwhelm,
    budget_sizes,
    imitation_swap,
    load_instance,
    load_pair,
    overwhelm_swap_matching,
    random_guess_matching,
    sample_wcg,
    sample_wcg_with_pair,
    save_instance,
    save_pair,
    validate_corruption,
)
from .matchers import (
    KCoreResult,
    default_k,
    enumerate_maximal_matchings,
    extend_to_maximal,
    f_statistic,
    genie_k_core,
    is_k_core_matching,
    is_weak_k_core,
    k_core_estimator_exact,
    k_core_of_graph,
    max_overlap_exact,
    max_overlap_localsearch,
    overlap_objective,
)
from .baselines import canonical_labeling, degree_profile, grampa, linear_assignment
from .theory import (
    OrbitProfile,
    ThresholdReport,
    alpha_star,
    aux_positivity,
    binom_chernoff_lower,
    binom_chernoff_upper,
    c_threshold,
    mgf_L_matrix,
    mgf_Lk,
    mgf_X,
    orbit_profile,
    scg_gamma_bound_lin,
    scg_gamma_bound_log,
    t_star,
    threshold_report,
    z_statistic,
)
from .harness import ExperimentConfig, TrialRecord, run_sweep, run_trial
from .rng import child_rng, make_rng
from .verify import available_suites, run_suite
