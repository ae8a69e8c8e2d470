"""Sinai walk lab: random walks in random environment, exact and simulated."""

from .const import NAME, VERSION
from .envgen import (
    make_env_law,
    sample_window,
    window_from_values,
    extend_window,
    reflect_window,
    restrict_window,
    potential_path,
)
from .decomp import (
    scan_left_extrema,
    bruteforce_left_extrema,
    right_extrema,
    localization_b_h,
    kesten_b_h_K,
    extract_canonical_slopes,
    ladder_epochs,
    zeta,
    glue,
    slope,
    central_valley,
    reconstruct,
)
from .quenched import (
    hit_prob,
    reversible_measure,
    reflected_invariant,
    reflected_kernel,
    quenched_dp,
    save_quenched_csv,
    expected_exit_time,
    valley_tail_mass,
)
from .walker import simulate_walk, hitting_time, batch_endpoints, annealed_endpoints, simulate_coupling
from .kesten import phi_inf, phi_cdf, llt_prediction, density_table
from .Controller import Controller


def __init__():
    """Initialize the Sinai walk lab."""
    pass
