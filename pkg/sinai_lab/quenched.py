"""Exact computations for a walk in a fixed environment."""
import logging

import numpy as np
from scipy import sparse
from scipy.linalg import solve_banded
from scipy.special import logsumexp

from .envgen import ensure_window
from .exceptions import RangeError
from .models import PotentialWindow, QuenchedDist, SiteMeasure
from .utils import Boundary, save_rows_as_csv

_LOGGER = logging.getLogger(__name__)


def _check_sites(window: PotentialWindow, *sites: int) -> None:
    for site in sites:
        if site < window.lo or site > window.hi:
            raise RangeError(
                "Site " + str(site) + " outside window [" + str(window.lo) + ", " + str(window.hi) + "]"
            )


def hit_prob(window: PotentialWindow, a: int, b: int, c: int, toward: str = "right") -> float:
    """P_omega^b[tau(c) < tau(a)] = sum_{a}^{b-1} e^V / sum_{a}^{c-1} e^V.

    Args:
        window (PotentialWindow): The environment.
        a (int): Lower barrier.
        b (int): Start.
        c (int): Upper barrier.
        toward (str): ``"right"`` for the probability of reaching c first,
            ``"left"`` for reaching a first.

    Returns:
        float: The probability.

    Raises:
        RangeError: If a < b < c fails or a site lies outside the window.
    """
    if not a < b < c:
        raise RangeError("hit_prob needs a < b < c, got " + str((a, b, c)))
    _check_sites(window, a, c)
    potential = window.segment(a, c - 1)
    total = logsumexp(potential)
    if toward == "right":
        part = logsumexp(potential[:b - a])
    elif toward == "left":
        part = logsumexp(potential[b - a:])
    else:
        raise RangeError("toward must be 'right' or 'left', got " + str(toward))
    return float(np.exp(part - total))


def reversible_measure(window: PotentialWindow, lo: int, hi: int) -> SiteMeasure:
    """mu_omega(x) = e^{-V(x)} + e^{-V(x-1)} on ``[lo, hi]``."""
    if lo > hi:
        raise RangeError("Empty range [" + str(lo) + ", " + str(hi) + "]")
    _check_sites(window, lo - 1, hi)
    potential = window.segment(lo - 1, hi)
    floor = float(potential.min())
    shifted = np.exp(-(potential - floor))
    return SiteMeasure(sites=np.arange(lo, hi + 1), weights=shifted[1:] + shifted[:-1], log_scale=-floor)


def _parity(n_parity) -> int:
    if isinstance(n_parity, str):
        if n_parity not in ("even", "odd"):
            raise RangeError("Parity must be 'even' or 'odd', got " + n_parity)
        return 0 if n_parity == "even" else 1
    return int(n_parity) % 2


def reflected_invariant(window: PotentialWindow, n_parity, M_minus: int, M_plus: int) -> SiteMeasure:
    """nu-hat: the invariant law of the two-step walk reflected at M- and M+.

    mu-hat(M-) = e^{-V(M-)}, mu-hat(M+) = e^{-V(M+ - 1)} and
    mu-hat(x) = e^{-V(x)} + e^{-V(x-1)} inside; nu-hat keeps the sites with
    the parity of n and divides by sum_{i=M-}^{M+ - 1} e^{-V(i)}.

    Args:
        window (PotentialWindow): The environment.
        n_parity: ``"even"``, ``"odd"`` or an integer whose parity is used.
        M_minus (int): Left reflecting site.
        M_plus (int): Right reflecting site.

    Returns:
        SiteMeasure: nu-hat on the sites of the parity class, summing to 1.
    """
    if M_minus >= M_plus:
        raise RangeError("Need M- < M+, got " + str((M_minus, M_plus)))
    _check_sites(window, M_minus, M_plus)
    parity = _parity(n_parity)
    potential = window.segment(M_minus, M_plus - 1)
    floor = float(potential.min())
    shifted = np.exp(-(potential - floor))
    weights = np.empty(M_plus - M_minus + 1)
    weights[0] = shifted[0]
    weights[-1] = shifted[-1]
    weights[1:-1] = shifted[1:] + shifted[:-1]
    sites = np.arange(M_minus, M_plus + 1)
    keep = (sites - parity) % 2 == 0
    return SiteMeasure(sites=sites[keep], weights=weights[keep] / shifted.sum(), log_scale=0.0)


def reflected_kernel(window: PotentialWindow, M_minus: int, M_plus: int) -> sparse.csr_matrix:
    """Transition matrix on [M-, M+] with omega-hat(M-) = 1 and omega-hat(M+) = 0."""
    if M_minus >= M_plus:
        raise RangeError("Need M- < M+, got " + str((M_minus, M_plus)))
    _check_sites(window, M_minus, M_plus)
    omega = np.array(window.omega[window.index(M_minus):window.index(M_plus) + 1], dtype=float)
    omega[0], omega[-1] = 1.0, 0.0
    size = omega.size
    return sparse.diags([1.0 - omega[1:], omega[:-1]], offsets=[-1, 1], shape=(size, size), format="csr")


def quenched_dp(
    window: PotentialWindow,
    start: int,
    n: int,
    boundary=Boundary.FULL,
    a: int = None,
    c: int = None,
) -> QuenchedDist:
    """Exact law of S_n under P_omega^start by forward recursion.

    ``full`` keeps every reachable site (the window is extended to
    [start - n, start + n]). ``absorbing`` removes the mass that reaches a or c
    and reports it as ``truncation_loss``, so that
    |P_full(S_n = z) - P_absorbing(S_n = z)| <= truncation_loss.

    Raises:
        RangeError: If n < 0 or the absorbing barriers do not surround start.
        ExtensionBudgetExceeded: If the full support cannot be materialized.
    """
    boundary = Boundary(boundary)
    if n < 0:
        raise RangeError("Step count must be non-negative, got " + str(n))
    if boundary == Boundary.FULL:
        lo, hi = start - n, start + n
        window = ensure_window(window, lo, hi)
    else:
        if a is None or c is None or not a < start < c:
            raise RangeError("Absorbing boundary needs a < start < c, got " + str((a, start, c)))
        lo, hi = a, c
        window = ensure_window(window, lo, hi)

    omega = np.nan_to_num(window.omega[window.index(lo):window.index(hi) + 1], nan=0.0)
    stay_right = omega.copy()
    stay_left = 1.0 - omega
    if boundary == Boundary.ABSORBING:
        stay_right[0] = stay_right[-1] = 0.0
        stay_left[0] = stay_left[-1] = 0.0

    mass = np.zeros(hi - lo + 1)
    mass[start - lo] = 1.0
    moved = np.empty_like(mass)
    absorbed = 0.0
    for _ in range(n):
        moved[0] = 0.0
        np.multiply(mass[:-1], stay_right[:-1], out=moved[1:])
        moved[:-1] += mass[1:] * stay_left[1:]
        if boundary == Boundary.ABSORBING:
            absorbed += moved[0] + moved[-1]
            moved[0] = moved[-1] = 0.0
        mass, moved = moved, mass

    sites = np.arange(lo, hi + 1)
    keep = (sites - start - n) % 2 == 0
    if boundary == Boundary.ABSORBING:
        keep &= (sites > a) & (sites < c)
    return QuenchedDist(
        n=n, start=start, sites=sites[keep], mass=mass[keep], truncation_loss=float(absorbed)
    )


def save_quenched_csv(dist: QuenchedDist, file_path: str) -> None:
    """Write ``site,probability`` rows under a comment line naming n, start and truncation_loss."""
    header = "n=" + str(dist.n) + ",start=" + str(dist.start) + ",truncation_loss=" + repr(dist.truncation_loss)
    rows = [{"site": int(site), "probability": float(p)} for site, p in zip(dist.sites, dist.mass)]
    save_rows_as_csv(rows, file_path, header_comment=header)


def expected_exit_time(window: PotentialWindow, a: int, c: int) -> np.ndarray:
    """E^x[tau(a) ^ tau(c)] for x = a, ..., c from the tridiagonal system
    E(x) = 1 + omega_x E(x+1) + (1 - omega_x) E(x-1), E(a) = E(c) = 0."""
    if c - a < 2:
        raise RangeError("Need at least one interior site between a and c")
    _check_sites(window, a, c)
    omega = window.omega[window.index(a) + 1:window.index(c)]
    size = omega.size
    banded = np.zeros((3, size))
    banded[0, 1:] = -omega[:-1]
    banded[1, :] = 1.0
    banded[2, :-1] = -(1.0 - omega[1:])
    interior = solve_banded((1, 1), banded, np.ones(size))
    return np.concatenate([[0.0], interior, [0.0]])


def valley_tail_mass(window: PotentialWindow, nu_hat: SiteMeasure, b: int, depth: float) -> float:
    """nu-hat mass of [M-, L-] and [L+, M+], where L-/L+ are the nearest sites
    left/right of b with V - V(b) >= depth."""
    base = window.v(b)
    potential = window.V
    origin = window.index(b)
    left = np.flatnonzero(potential[:origin + 1][::-1] - base >= depth)
    right = np.flatnonzero(potential[origin:] - base >= depth)
    lower = b - int(left[0]) if left.size else window.lo - 1
    upper = b + int(right[0]) if right.size else window.hi + 1
    outside = (nu_hat.sites <= lower) | (nu_hat.sites >= upper)
    return float(nu_hat.values()[outside].sum())
