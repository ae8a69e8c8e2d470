"""Annealed point masses P(S_n = z) against the local limit prediction."""
import logging
import math

import numpy as np

from ..const import DEFAULT_SITE_CAP
from ..envgen import initial_half_width, sample_window
from ..exceptions import ExtensionBudgetExceeded, RangeError
from ..kesten import llt_prediction
from ..models import EnvLaw, EventParams
from ..quenched import quenched_dp, reflected_invariant
from ..utils import Boundary, LltMethod, LltMode, Streams, binomial_stderr, mean_stderr, replicate_seed
from ..walker import annealed_endpoints
from .coupling import same_parity
from .events import profile_at, resolve_event_params, survey_environment
from .parallel import chunk_bounds, run_chunks

_LOGGER = logging.getLogger(__name__)


def _direct_chunk(start, stop, law, n, grid, seed, site_cap):
    env_seeds = [replicate_seed(seed, Streams.LLT, replicate) for replicate in range(start, stop)]
    walk_seed = replicate_seed(seed, Streams.WALK, start)
    try:
        endpoints = annealed_endpoints(law, env_seeds, 0, n, walk_seed, site_cap)
    except ExtensionBudgetExceeded as exception:
        _LOGGER.debug("Chunk at %d excluded: %s", start, exception)
        return np.zeros((0, len(grid))), 0, stop - start
    hits = (endpoints[:, None] == np.asarray(grid)[None, :]).astype(float)
    in_class = int(np.count_nonzero((endpoints - n) % 2 == 0))
    return hits, in_class, 0


def _dp_chunk(start, stop, law, n, grid, seed, site_cap):
    values, excluded = [], 0
    for replicate in range(start, stop):
        try:
            window = sample_window(law, replicate_seed(seed, Streams.LLT, replicate), -n, n, site_cap)
        except ExtensionBudgetExceeded:
            excluded += 1
            continue
        dist = quenched_dp(window, 0, n, Boundary.FULL)
        values.append([dist.prob(z) for z in grid])
    return np.asarray(values, dtype=float).reshape(-1, len(grid)), None, excluded


def _proxy_chunk(start, stop, law, n, grid, seed, site_cap, params):
    values, excluded = [], 0
    half_width = min(initial_half_width(law, math.log(n)), site_cap)
    for replicate in range(start, stop):
        try:
            window = sample_window(law, replicate_seed(seed, Streams.LLT, replicate), -half_width, half_width, site_cap)
            survey = survey_environment(window, n, params)
        except ExtensionBudgetExceeded:
            excluded += 1
            continue
        row = []
        nu_hat = None
        for z in grid:
            if profile_at(survey, z).E_C:
                if nu_hat is None:
                    nu_hat = reflected_invariant(survey.window, n, survey.M_minus, survey.M_plus)
                row.append(nu_hat.at(z))
            else:
                row.append(0.0)
        values.append(row)
    return np.asarray(values, dtype=float).reshape(-1, len(grid)), None, excluded


def verify_sinai_llt(
    law: EnvLaw,
    n: int,
    z_grid,
    N: int,
    seed: int,
    method: LltMethod = LltMethod.PROXY,
    params: EventParams = None,
    threads: int = 1,
    site_cap: int = DEFAULT_SITE_CAP,
) -> dict:
    """Estimate P(S_n = z) on a grid and compare with 2 sigma^2/(log n)^2 phi(sigma^2 z/(log n)^2).

    Every z is moved to the parity of n first.

    Args:
        law (EnvLaw): The environment law.
        n (int): Time, >= 3.
        z_grid: Sites.
        N (int): Environments.
        seed (int): Master seed.
        method (LltMethod): ``direct`` simulates one walk per environment,
            ``dp`` averages the exact quenched law (small n only) and
            ``proxy`` averages nu-hat(z) 1_{E_C(z)}.
        params (EventParams): Event constants for the proxy method.
        threads (int): Worker processes.
        site_cap (int): Largest |site| sampled per environment.

    Returns:
        dict: ``rows`` with estimate, stderr, prediction and scaled error per
        z, the parity-class ``mass`` of the direct method and the excluded count.
    """
    if n < 3 or N < 1:
        raise RangeError("Local limit check needs n >= 3 and N >= 1")
    method = LltMethod(method)
    grid = sorted(set(same_parity(int(z), n) for z in z_grid))
    bounds = chunk_bounds(N)
    if method == LltMethod.DIRECT:
        parts = run_chunks(_direct_chunk, bounds, threads, law, n, grid, seed, site_cap)
    elif method == LltMethod.DP:
        parts = run_chunks(_dp_chunk, bounds, threads, law, n, grid, seed, site_cap)
    else:
        parts = run_chunks(_proxy_chunk, bounds, threads, law, n, grid, seed, site_cap, resolve_event_params(params))
    values = np.concatenate([part[0] for part in parts])
    excluded = sum(part[2] for part in parts)
    if excluded:
        _LOGGER.warning("%d of %d environments excluded at n=%d", excluded, N, n)
    count = values.shape[0]
    scale = math.log(n) ** 2 / (2.0 * law.sigma**2)
    rows = []
    for column, z in enumerate(grid):
        if method == LltMethod.DIRECT:
            estimate = float(values[:, column].mean()) if count else math.nan
            stderr = binomial_stderr(estimate, count)
        else:
            estimate, stderr = mean_stderr(values[:, column])
        prediction = llt_prediction(LltMode.WALK, z, law.sigma, n)
        rows.append(
            {
                "z": z,
                "estimate": estimate,
                "stderr": stderr,
                "prediction": prediction,
                "scaled": estimate * scale,
                "scaled_error": (estimate - prediction) * scale,
            }
        )
    mass = None
    if method == LltMethod.DIRECT and count:
        mass = sum(part[1] for part in parts) / count
    return {"n": n, "method": method.value, "N": N, "valid": count, "excluded": excluded, "rows": rows, "mass": mass}
