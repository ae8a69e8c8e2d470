"""Quenched law at time n against the reflected invariant measure, and coupling statistics."""
import logging
import math

import numpy as np

from ..const import DEFAULT_SITE_CAP, STDERR_WIDTH
from ..decomp import scan_left_extrema
from ..envgen import initial_half_width, sample_window
from ..exceptions import ExtensionBudgetExceeded, RangeError
from ..models import EnvLaw, EventParams
from ..quenched import quenched_dp, reflected_invariant, valley_tail_mass
from ..utils import Boundary, Streams, binomial_stderr, replicate_seed
from ..walker import simulate_coupling
from .events import profile_at, resolve_event_params, survey_environment
from .parallel import chunk_bounds, run_chunks

_LOGGER = logging.getLogger(__name__)

# Environments per work unit; each accepted one costs a full dynamic programme.
COUPLING_CHUNK = 8
# Chunks examined between two checks of the accepted count.
ROUND_CHUNKS = 4


def same_parity(z: int, n: int) -> int:
    """z moved up by one when its parity differs from the parity of n."""
    return z + (z - n) % 2


def _coupling_chunk(
    start: int, stop: int, law: EnvLaw, n: int, z: int, params: EventParams, seed: int, site_cap: int
) -> list[dict]:
    log_n = math.log(n)
    half_width = min(initial_half_width(law, log_n), site_cap)
    records = []
    for replicate in range(start, stop):
        env_seed = replicate_seed(seed, Streams.COUPLING, replicate)
        try:
            window = sample_window(law, env_seed, -half_width, half_width, site_cap)
            survey = survey_environment(window, n, params)
            if not profile_at(survey, z).E_C:
                records.append({"replicate": replicate, "accepted": False})
                continue
            decomposition = scan_left_extrema(survey.window, log_n, -3, 3, flank=0)
            window = decomposition.window
            a, c = decomposition.position(-3), decomposition.position(3)
            dist = quenched_dp(window, 0, n, Boundary.ABSORBING, a, c)
            nu_hat = reflected_invariant(window, n, survey.M_minus, survey.M_plus)
            quenched = dist.prob(z)
            invariant = nu_hat.at(z)
            tail = valley_tail_mass(window, nu_hat, survey.b, survey.h_n)
            coupling = simulate_coupling(
                window, n, replicate_seed(seed, Streams.COUPLING_WALK, replicate), decomposition
            )
        except ExtensionBudgetExceeded as exception:
            _LOGGER.debug("Coupling replicate %d excluded: %s", replicate, exception)
            records.append({"replicate": replicate, "accepted": False, "excluded": True})
            continue
        records.append(
            {
                "replicate": replicate,
                "accepted": True,
                "quenched": quenched,
                "nu_hat": invariant,
                "bracket": dist.truncation_loss,
                "discrepancy": abs(quenched - invariant) + dist.truncation_loss,
                "tail_mass": tail,
                "tau_meet": coupling.tau_meet,
                "tau_exit": coupling.tau_exit,
            }
        )
    return records


def coupling_experiment(
    law: EnvLaw,
    n: int,
    N: int,
    seed: int,
    z: int = 0,
    params: EventParams = None,
    threads: int = 1,
    site_cap: int = DEFAULT_SITE_CAP,
    max_environments: int = None,
) -> dict:
    """Compare P_omega(S_n = z) with nu-hat(z) on N environments of E_C(z).

    Environments are examined in replicate order until N of them fall in
    E_C(z) or ``max_environments`` have been drawn. For each accepted
    environment the absorbing dynamic programme over [x_-3, x_3] brackets
    P_omega(S_n = z) and one coupling of S and the reflected walk is run.

    Returns:
        dict: summary rows, the per-environment records and the counts of
        accepted, skipped and excluded environments.
    """
    if n < 3 or N < 1:
        raise RangeError("Coupling experiment needs n >= 3 and N >= 1")
    params = resolve_event_params(params)
    z = same_parity(z, n)
    limit = max_environments if max_environments is not None else 50 * N
    records = []
    drawn = 0
    while drawn < limit and sum(record["accepted"] for record in records) < N:
        size = min(ROUND_CHUNKS * COUPLING_CHUNK, limit - drawn)
        bounds = chunk_bounds(size, COUPLING_CHUNK, first=drawn)
        for part in run_chunks(_coupling_chunk, bounds, threads, law, n, z, params, seed, site_cap):
            records.extend(part)
        drawn += size

    accepted = [record for record in records if record["accepted"]][:N]
    last = accepted[-1]["replicate"] if len(accepted) == N else drawn - 1
    examined = [record for record in records if record["replicate"] <= last]
    excluded = sum(1 for record in examined if record.get("excluded"))
    skipped = len(examined) - len(accepted) - excluded
    if len(accepted) < N:
        _LOGGER.warning("Only %d of %d requested environments fell in E_C(%d)", len(accepted), N, z)
    return {
        "n": n,
        "z": z,
        "accepted": len(accepted),
        "skipped": skipped,
        "excluded": excluded,
        "rows": summarize_coupling(accepted, n),
        "records": accepted,
    }


def _quantile(values: np.ndarray, q: float) -> float:
    return float(np.quantile(values, q)) if values.size else math.nan


def summarize_coupling(records: list[dict], n: int) -> list[dict]:
    """Pass fraction of the discrepancy bound, coupling tail fractions and meeting quantiles."""
    count = len(records)
    log_n = math.log(n)
    bound = 5.0 * log_n**-3
    meet = np.array([record["tau_meet"] if record["tau_meet"] is not None else n + 1 for record in records])
    exits = np.array([record["tau_exit"] if record["tau_exit"] is not None else n + 1 for record in records])

    def fraction(mask):
        value = float(np.mean(mask)) if count else math.nan
        return value, binomial_stderr(value, count)

    good, good_se = fraction([record["discrepancy"] <= bound for record in records])
    late, late_se = fraction(meet > n / 10)
    early, early_se = fraction(exits <= n)
    tails, tails_se = fraction([record["tail_mass"] <= log_n**-4 for record in records])
    return [
        {"quantity": "fraction |P - nu_hat| + bracket <= 5 (log n)^-3", "estimate": good, "prediction": 0.9,
         "stderr": good_se, "pass": count > 0 and good >= 0.9},
        {"quantity": "fraction tau_meet > n/10", "estimate": late, "prediction": 2.0 * log_n**-3,
         "stderr": late_se, "pass": count > 0 and late <= 2.0 * log_n**-3 + STDERR_WIDTH * late_se},
        {"quantity": "fraction tau_exit <= n", "estimate": early, "prediction": log_n**-3,
         "stderr": early_se, "pass": count > 0 and early <= log_n**-3 + STDERR_WIDTH * early_se},
        {"quantity": "fraction valley tail mass <= (log n)^-4", "estimate": tails, "prediction": None,
         "stderr": tails_se, "pass": None},
        {"quantity": "median tau_meet", "estimate": _quantile(meet, 0.5), "prediction": None,
         "stderr": None, "pass": None},
        {"quantity": "0.9 quantile tau_meet", "estimate": _quantile(meet, 0.9), "prediction": None,
         "stderr": None, "pass": None},
    ]
