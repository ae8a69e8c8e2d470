"""Monte Carlo estimators, environment events and verification suites."""

from .parallel import chunk_bounds, run_chunks
from .estimators import (
    sample_bottoms,
    estimate_bh_law,
    monotone_violations,
    b_h_disagreement,
    sample_slopes,
    check_renewal_identity,
    estimate_slope_moments,
    race_probabilities,
    ladder_entrances,
    estimate_c_constants,
    conditioned_walk_sample,
    conditioned_law_check,
)
from .events import (
    event_scales,
    resolve_event_params,
    survey_environment,
    profile_at,
    classify_events,
    event_frequencies,
)
from .coupling import same_parity, coupling_experiment, summarize_coupling
from .sinai_llt import verify_sinai_llt
from .suites import SUITE_DEFAULTS, SUITES, run_suite


def __init__():
    """Initialize the experiments package."""
    pass
