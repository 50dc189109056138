"""Stable-matching spectrum allocation between secondary and primary users."""
from .detection import Hypothesis, detect, detection_matrix, log_posterior_ratio, sample_observations
from .harness import SweepConfig, run_sweep, run_trial, simulate_trial, write_results, read_results
from .matching import (
    InconsistentMatchingError,
    Matching,
    brute_force_stable_matchings,
    is_stable,
    run_algorithm1,
    run_deferred_acceptance,
    run_random_allocation,
)
from .metrics import TrialMetrics, improvement_pct, matched_sum_and_min, random_allocation_rates
from .preferences import EXP_UTILITY, IDENTITY_UTILITY, ProposalTable, PuUtility, build_preferences, pu_prefers, pu_utility, su_utility
from .scenario import (
    NetworkInstance,
    ScenarioConfig,
    achievable_rate,
    channel_gain,
    dbm_to_linear,
    rate_matrix,
    sample_instance,
)

__version__ = "0.1.0"
