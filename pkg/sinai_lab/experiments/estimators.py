"""Monte Carlo estimators for the bottom b_h, the canonical slopes and the ladder constants."""
import logging
import math

import numpy as np
from scipy import stats

from ..const import DEFAULT_REJECTION_CAP, DEFAULT_SITE_CAP, STDERR_WIDTH
from ..decomp import extract_canonical_slopes, kesten_b_h_K, localization_b_h, scan_left_extrema
from ..envgen import initial_half_width, sample_window
from ..exceptions import ExtensionBudgetExceeded, RangeError, RejectionBudgetExceeded
from ..kesten import llt_prediction
from ..models import ConditionedPath, EnvLaw, EstimateResult
from ..utils import (
    Conditioning,
    LltMode,
    SlopeVariant,
    Streams,
    binomial_stderr,
    combined_stderr,
    mean_stderr,
    product_stderr,
    ratio_stderr,
    replicate_seed,
    stream_generator,
)
from .parallel import chunk_bounds, run_chunks

_LOGGER = logging.getLogger(__name__)

_STEP_BLOCK = 64


def _check_positive(h: float, count: int) -> None:
    if h <= 0:
        raise RangeError("Height must be positive, got " + str(h))
    if count < 1:
        raise RangeError("Replicate count must be at least 1, got " + str(count))


def _advance(law: EnvLaw, generator: np.random.Generator, level: np.ndarray, width: int):
    """Continue potential paths from ``level`` for ``width`` steps.

    Lattice laws carry the integer step count as ``raw`` and scale it once,
    the same way windows are built, so a return to 0 is exactly 0.

    Returns:
        tuple[np.ndarray, np.ndarray]: raw levels and potential values, one row per path.
    """
    uniforms = generator.random((level.size, width))
    if law.lattice is not None:
        raw = np.cumsum(np.where(uniforms < 0.5, 1, -1), axis=1) + level[:, None]
        return raw, raw * law.unit + 0.0
    raw = np.cumsum(law.param * (2.0 * uniforms - 1.0), axis=1) + level[:, None]
    return raw, raw


def _start_level(law: EnvLaw, count: int) -> np.ndarray:
    return np.zeros(count, dtype=np.int64 if law.lattice is not None else float)


# Bottom of the central valley


def _bottom_chunk(start: int, stop: int, law: EnvLaw, h: float, seed: int, site_cap: int, kesten: bool):
    half_width = min(initial_half_width(law, h), site_cap)
    size = stop - start
    bottoms = np.zeros(size, dtype=np.int64)
    kesten_bottoms = np.zeros(size, dtype=np.int64)
    valid = np.ones(size, dtype=bool)
    for offset, replicate in enumerate(range(start, stop)):
        env_seed = replicate_seed(seed, Streams.BOTTOM, replicate)
        try:
            window = sample_window(law, env_seed, -half_width, half_width, site_cap)
            decomposition = scan_left_extrema(window, h, 0, 1, flank=0)
            bottoms[offset] = localization_b_h(decomposition)
            if kesten:
                kesten_bottoms[offset] = kesten_b_h_K(decomposition.window, h)
        except ExtensionBudgetExceeded as exception:
            _LOGGER.debug("Replicate %d excluded: %s", replicate, exception)
            valid[offset] = False
    return bottoms, kesten_bottoms, valid


def sample_bottoms(
    law: EnvLaw, h: float, N: int, seed: int, threads: int = 1, site_cap: int = DEFAULT_SITE_CAP, kesten: bool = False
):
    """b_h (and optionally b_h^(K)) of N independent environments.

    Returns:
        tuple[np.ndarray, np.ndarray, int]: b_h and b_h^(K) of the certified
        environments, and the number of environments excluded by the site cap.
    """
    _check_positive(h, N)
    parts = run_chunks(_bottom_chunk, chunk_bounds(N), threads, law, h, seed, site_cap, kesten)
    bottoms = np.concatenate([part[0] for part in parts])
    kesten_bottoms = np.concatenate([part[1] for part in parts])
    valid = np.concatenate([part[2] for part in parts])
    excluded = int(np.count_nonzero(~valid))
    if excluded:
        _LOGGER.warning("%d of %d environments excluded at h=%s", excluded, N, h)
    return bottoms[valid], kesten_bottoms[valid], excluded


def default_x_grid(law: EnvLaw, h: float) -> list[int]:
    """Sites at multiples of h^2 / (4 sigma^2) up to 2 h^2 / sigma^2, plus 0 and +-1."""
    scale = h * h / (law.sigma * law.sigma)
    points = {0, 1, -1}
    for multiple in np.arange(-2.0, 2.0001, 0.25):
        points.add(int(round(multiple * scale)))
    return sorted(points)


def estimate_bh_law(
    law: EnvLaw,
    h: float,
    N: int,
    seed: int,
    x_grid=None,
    threads: int = 1,
    site_cap: int = DEFAULT_SITE_CAP,
) -> dict:
    """Histogram of b_h over N environments against the bottom local limit prediction.

    Args:
        law (EnvLaw): The environment law.
        h (float): The height.
        N (int): Environments.
        seed (int): Master seed.
        x_grid: Sites of the histogram; None picks ``default_x_grid``.
        threads (int): Worker processes.
        site_cap (int): Largest |site| sampled per environment.

    Returns:
        dict: ``rows`` (x, count, estimate, stderr, prediction), ``overflow``,
        ``excluded``, ``valid`` and the scaled sup-distance ``D``.
    """
    bottoms, _, excluded = sample_bottoms(law, h, N, seed, threads, site_cap)
    grid = sorted(set(int(x) for x in (x_grid if x_grid is not None else default_x_grid(law, h))))
    valid = int(bottoms.size)
    rows = []
    for x in grid:
        count = int(np.count_nonzero(bottoms == x))
        frequency = count / valid if valid else math.nan
        rows.append(
            {
                "x": x,
                "count": count,
                "estimate": frequency,
                "stderr": binomial_stderr(frequency, valid),
                "prediction": llt_prediction(LltMode.BOTTOM, x, law.sigma, h),
            }
        )
    overflow = valid - sum(row["count"] for row in rows)
    distance = max(abs(row["estimate"] - row["prediction"]) for row in rows) if valid else math.nan
    positive = float(np.mean(bottoms > 0)) if valid else math.nan
    return {
        "h": h,
        "N": N,
        "valid": valid,
        "excluded": excluded,
        "overflow": overflow,
        "rows": rows,
        "D": h * h * distance,
        "positive": EstimateResult(
            name="P(b_h>0)", estimate=positive, stderr=binomial_stderr(positive, valid), N=valid, seed=seed
        ),
    }


def monotone_violations(rows: list[dict], width: float = STDERR_WIDTH) -> list[tuple[int, int]]:
    """Consecutive grid pairs breaking "nonincreasing on N, nondecreasing on -N" by more
    than ``width`` combined standard errors."""
    ordered = sorted(rows, key=lambda row: row["x"])
    violations = []
    for left, right in zip(ordered, ordered[1:]):
        if left["x"] >= 0:
            outer, inner = right, left
        elif right["x"] <= 0:
            outer, inner = left, right
        else:
            continue
        if outer["estimate"] - inner["estimate"] > width * combined_stderr(outer["stderr"], inner["stderr"]):
            violations.append((left["x"], right["x"]))
    return violations


def b_h_disagreement(
    law: EnvLaw, h_grid, N: int, seed: int, threads: int = 1, site_cap: int = DEFAULT_SITE_CAP
) -> list[dict]:
    """h times the frequency of {b_h != b_h^(K)} for each h of the grid."""
    rows = []
    for h in h_grid:
        bottoms, kesten_bottoms, excluded = sample_bottoms(law, h, N, seed, threads, site_cap, kesten=True)
        frequency = float(np.mean(bottoms != kesten_bottoms)) if bottoms.size else math.nan
        rows.append(
            {
                "h": h,
                "estimate": h * frequency,
                "stderr": h * binomial_stderr(frequency, bottoms.size),
                "excluded": excluded,
            }
        )
    return rows


# Canonical slopes


def _hitting_index(values: np.ndarray, h: float) -> int:
    return int(np.argmax(values >= h))


def _slope_chunk(start: int, stop: int, law: EnvLaw, h: float, seed: int, site_cap: int, variant: str):
    width = min(initial_half_width(law, h), site_cap)
    size = stop - start
    up_lengths = np.zeros(size, dtype=np.int64)
    down_lengths = np.zeros(size, dtype=np.int64)
    up_excess = np.zeros(size)
    down_excess = np.zeros(size)
    up_hits = np.zeros(size, dtype=np.int64)
    valid = np.ones(size, dtype=bool)
    for offset, replicate in enumerate(range(start, stop)):
        env_seed = replicate_seed(seed, Streams.SLOPES, replicate)
        try:
            window = sample_window(law, env_seed, 0, width, site_cap)
            upward, downward = extract_canonical_slopes(window, h, variant)
        except ExtensionBudgetExceeded as exception:
            _LOGGER.debug("Slope replicate %d excluded: %s", replicate, exception)
            valid[offset] = False
            continue
        up_lengths[offset] = upward.length
        down_lengths[offset] = downward.length
        up_excess[offset] = upward.excess
        down_excess[offset] = downward.excess
        up_hits[offset] = _hitting_index(upward.values, h)
    return up_lengths, down_lengths, up_excess, down_excess, up_hits, valid


def sample_slopes(
    law: EnvLaw,
    h: float,
    N: int,
    seed: int,
    threads: int = 1,
    site_cap: int = DEFAULT_SITE_CAP,
    variant: SlopeVariant = SlopeVariant.PLAIN,
) -> dict:
    """Lengths, excess heights and h-hitting indices of N samples of (T_up, T_down)."""
    _check_positive(h, N)
    variant = SlopeVariant(variant)
    parts = run_chunks(_slope_chunk, chunk_bounds(N), threads, law, h, seed, site_cap, variant.value)
    valid = np.concatenate([part[5] for part in parts])
    names = ("up_lengths", "down_lengths", "up_excess", "down_excess", "up_hits")
    sample = {name: np.concatenate([part[i] for part in parts])[valid] for i, name in enumerate(names)}
    sample["excluded"] = int(np.count_nonzero(~valid))
    if sample["excluded"]:
        _LOGGER.warning("%d of %d slope samples excluded at h=%s", sample["excluded"], N, h)
    return sample


def check_renewal_identity(
    law: EnvLaw,
    h: float,
    N: int,
    seed: int,
    x_grid,
    threads: int = 1,
    site_cap: int = DEFAULT_SITE_CAP,
) -> dict:
    """Compare P(b_h = x) with the renewal expression built from T_up and T_down.

    RHS(x) = P(l(T_down) >= x) / E[l(T_up) + l(T_down)] for x >= 0 and
    P(l(T_up) > -x) / E[...] for x <= 0. Both sides use N environments from
    separate streams; the ratio error comes from the delta method.

    Returns:
        dict: ``rows`` with lhs, rhs and combined stderr per x, the x = 0
        consistency row ``zero`` and the row ``up_mean`` comparing E[l(T_up)]
        with P(b_h <= 0) / P(b_h = 0).
    """
    bottoms, _, bottom_excluded = sample_bottoms(law, h, N, seed, threads, site_cap)
    slopes = sample_slopes(law, h, N, seed, threads, site_cap)
    up, down = slopes["up_lengths"], slopes["down_lengths"]
    lengths = up + down
    valid = bottoms.size
    rows = []
    for x in sorted(set(int(x) for x in x_grid)):
        lhs = float(np.mean(bottoms == x))
        lhs_stderr = binomial_stderr(lhs, valid)
        survivors = down >= x if x >= 0 else up > -x
        rhs, rhs_stderr = ratio_stderr(survivors.astype(float), lengths)
        stderr = combined_stderr(lhs_stderr, rhs_stderr)
        rows.append(
            {
                "x": x,
                "lhs": lhs,
                "lhs_stderr": lhs_stderr,
                "rhs": rhs,
                "rhs_stderr": rhs_stderr,
                "stderr": stderr,
                "pass": abs(lhs - rhs) <= STDERR_WIDTH * stderr,
            }
        )

    at_zero = float(np.mean(bottoms == 0))
    mean_length, mean_length_stderr = mean_stderr(lengths)
    zero_stderr = product_stderr(at_zero, binomial_stderr(at_zero, valid), mean_length, mean_length_stderr)
    zero = {"estimate": at_zero * mean_length, "prediction": 1.0, "stderr": zero_stderr}

    up_mean, up_stderr = mean_stderr(up)
    ratio, ratio_se = ratio_stderr((bottoms <= 0).astype(float), (bottoms == 0).astype(float))
    up_row = {"estimate": up_mean, "prediction": ratio, "stderr": combined_stderr(up_stderr, ratio_se)}
    return {
        "h": h,
        "N": N,
        "rows": rows,
        "zero": zero,
        "up_mean": up_row,
        "excluded": bottom_excluded + slopes["excluded"],
    }


def estimate_slope_moments(
    law: EnvLaw,
    h: float,
    N: int,
    seed: int,
    delta_grid=(),
    threads: int = 1,
    site_cap: int = DEFAULT_SITE_CAP,
) -> dict:
    """Mean lengths of T_up and T_down and the empirical law of the excess height.

    Returns:
        dict: ``up`` and ``down`` EstimateResults, and ``excess`` rows with
        P(e <= delta) and h / delta * P(e <= delta), pooled over both slopes.
    """
    slopes = sample_slopes(law, h, N, seed, threads, site_cap)
    up_mean, up_stderr = mean_stderr(slopes["up_lengths"])
    down_mean, down_stderr = mean_stderr(slopes["down_lengths"])
    excess = np.concatenate([slopes["up_excess"], slopes["down_excess"]])
    rows = []
    for delta in delta_grid:
        frequency = float(np.mean(excess <= delta)) if excess.size else math.nan
        stderr = binomial_stderr(frequency, excess.size)
        rows.append(
            {
                "delta": float(delta),
                "estimate": frequency,
                "stderr": stderr,
                "scaled": frequency * h / delta,
                "scaled_stderr": stderr * h / delta,
            }
        )
    count = int(slopes["up_lengths"].size)
    return {
        "h": h,
        "up": EstimateResult(
            name="E[l(T_up)]", estimate=up_mean, stderr=up_stderr, N=count, seed=seed, params={"h": h}
        ),
        "down": EstimateResult(
            name="E[l(T_down)]", estimate=down_mean, stderr=down_stderr, N=count, seed=seed, params={"h": h}
        ),
        "excess": rows,
        "up_hits": slopes["up_hits"],
        "excluded": slopes["excluded"],
    }


# Races of a single potential path


def _race_chunk(start: int, stop: int, law: EnvLaw, h: float, seed: int):
    """Run paths from 0 until they reach [h, inf) or (-inf, 0).

    Returns:
        tuple[np.ndarray, np.ndarray]: reached h first (weak), and reached h
        without visiting (-inf, 0] at a time >= 1 (strict).
    """
    count = stop - start
    generator = stream_generator(seed, Streams.RACE.value, start)
    level = _start_level(law, count)
    alive = np.arange(count)
    weak = np.zeros(count, dtype=bool)
    touched = np.zeros(count, dtype=bool)
    columns = np.arange(_STEP_BLOCK)
    while alive.size:
        raw, values = _advance(law, generator, level[alive], _STEP_BLOCK)
        exits = (values >= h) | (values < 0)
        stopped = exits.any(axis=1)
        first = np.where(stopped, exits.argmax(axis=1), _STEP_BLOCK - 1)
        before = columns[None, :] <= first[:, None]
        touched[alive] |= ((values <= 0) & before).any(axis=1)
        rows = np.arange(alive.size)
        weak[alive[stopped]] = values[rows, first][stopped] >= h
        level[alive] = raw[rows, first]
        alive = alive[~stopped]
    return weak, weak & ~touched


def race_probabilities(law: EnvLaw, h: float, N: int, seed: int, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Indicators of Xi_h (weak) and Xi_h* (strict) for N independent paths."""
    _check_positive(h, N)
    parts = run_chunks(_race_chunk, chunk_bounds(N), threads, law, h, seed)
    return np.concatenate([part[0] for part in parts]), np.concatenate([part[1] for part in parts])


def _ladder_chunk(start: int, stop: int, law: EnvLaw, horizon: int, seed: int, strict: bool):
    """First entrance of paths from 0 into (-inf, 0) (or (-inf, 0] when strict).

    Returns:
        tuple[np.ndarray, np.ndarray]: entrance time (-1 when censored at the
        horizon) and the potential value there.
    """
    count = stop - start
    generator = stream_generator(seed, Streams.SPITZER.value, int(strict), start)
    level = _start_level(law, count)
    times = np.full(count, -1, dtype=np.int64)
    entries = np.zeros(count)
    alive = np.arange(count)
    elapsed = 0
    while alive.size and elapsed < horizon:
        width = min(_STEP_BLOCK, horizon - elapsed)
        raw, values = _advance(law, generator, level[alive], width)
        exits = values <= 0 if strict else values < 0
        stopped = exits.any(axis=1)
        first = exits.argmax(axis=1)
        rows = np.arange(alive.size)
        done = alive[stopped]
        times[done] = elapsed + first[stopped] + 1
        entries[done] = values[rows, first][stopped]
        level[alive] = raw[:, -1]
        alive = alive[~stopped]
        elapsed += width
    return times, entries


def ladder_entrances(
    law: EnvLaw, horizon: int, N: int, seed: int, conditioning: Conditioning, threads: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Entrance times and values of N paths into (-inf, 0) (weak) or (-inf, 0] (strict)."""
    if horizon < 1 or N < 1:
        raise RangeError("Horizon and replicate count must be positive")
    strict = Conditioning(conditioning) == Conditioning.STRICT
    parts = run_chunks(_ladder_chunk, chunk_bounds(N), threads, law, horizon, seed, strict)
    return np.concatenate([part[0] for part in parts]), np.concatenate([part[1] for part in parts])


def estimate_c_constants(
    law: EnvLaw,
    h_grid,
    N: int,
    seed: int,
    x_grid=(1000, 10000),
    threads: int = 1,
    site_cap: int = DEFAULT_SITE_CAP,
) -> dict:
    """Estimate c1, c1*, c6 = lim h^2 P(b_h = 0), P(b_h > 0) and the Spitzer plateau.

    c1(h) = h P(T_V(h) < T_V(R_-*)) and c1*(h) = h P(T_V(h) < T_V*(R_-)) come
    from one race per h. The ladder forms c1 = -E[V(T_V(R_-*))] and
    c1* = -E[V(T_V*(R_-))] and P(G_x) sqrt(x) come from one entrance race run
    up to the largest x.

    Returns:
        dict: ``heights`` rows per h, ``ladder`` EstimateResults and
        ``spitzer`` rows per (conditioning, x).
    """
    heights = []
    for h in h_grid:
        weak, strict = race_probabilities(law, h, N, seed, threads)
        p_weak, p_strict = float(weak.mean()), float(strict.mean())
        bottoms, _, excluded = sample_bottoms(law, h, N, seed, threads, site_cap)
        valid = bottoms.size
        at_zero = float(np.mean(bottoms == 0))
        positive = float(np.mean(bottoms > 0))
        c1, c1_se = h * p_weak, h * binomial_stderr(p_weak, N)
        c1_star, c1_star_se = h * p_strict, h * binomial_stderr(p_strict, N)
        heights.append(
            {
                "h": h,
                "c1": c1,
                "c1_stderr": c1_se,
                "c1_star": c1_star,
                "c1_star_stderr": c1_star_se,
                "c6": h * h * at_zero,
                "c6_stderr": h * h * binomial_stderr(at_zero, valid),
                "product": c1 * c1_star,
                "product_stderr": product_stderr(c1, c1_se, c1_star, c1_star_se),
                "positive": positive,
                "positive_stderr": binomial_stderr(positive, valid),
                "excluded": excluded,
            }
        )

    horizon = int(max(x_grid))
    ladder, spitzer = {}, []
    for conditioning in Conditioning:
        times, entries = ladder_entrances(law, horizon, N, seed, conditioning, threads)
        entered = times >= 0
        censored = int(np.count_nonzero(~entered))
        if censored:
            _LOGGER.debug("%d of %d %s ladder paths censored at %d", censored, N, conditioning.value, horizon)
        name = "c1" if conditioning == Conditioning.WEAK else "c1*"
        mean, stderr = mean_stderr(-entries[entered])
        ladder[name] = EstimateResult(
            name=name, estimate=mean, stderr=stderr, N=int(entered.sum()), seed=seed, params={"censored": censored}
        )
        for x in x_grid:
            survival = float(np.mean(~entered | (times > x)))
            spitzer.append(
                {
                    "conditioning": conditioning.value,
                    "x": int(x),
                    "estimate": survival * math.sqrt(x),
                    "stderr": binomial_stderr(survival, N) * math.sqrt(x),
                }
            )
    return {"heights": heights, "ladder": ladder, "spitzer": spitzer}


# Conditioned paths


def conditioned_walk_sample(
    law: EnvLaw,
    h: float,
    variant: Conditioning,
    seed: int,
    max_attempts: int = DEFAULT_REJECTION_CAP,
) -> ConditionedPath:
    """Sample V from 0 up to T_V(h) conditioned on reaching [h, inf) before
    (-inf, 0) (weak) or before (-inf, 0] at times >= 1 (strict).

    Raises:
        RejectionBudgetExceeded: If no path is accepted within ``max_attempts``.
    """
    _check_positive(h, 1)
    strict = Conditioning(variant) == Conditioning.STRICT
    generator = stream_generator(seed, Streams.REJECTION.value)
    for attempt in range(1, max_attempts + 1):
        level = _start_level(law, 1)
        pieces = [np.zeros(1)]
        while True:
            raw, values = _advance(law, generator, level, _STEP_BLOCK)
            row = values[0]
            exits = (row >= h) | ((row <= 0) if strict else (row < 0))
            if exits.any():
                first = int(exits.argmax())
                pieces.append(row[:first + 1])
                accepted = bool(row[first] >= h)
                break
            pieces.append(row)
            level = raw[:, -1]
        if accepted:
            return ConditionedPath(path=np.concatenate(pieces), attempts=attempt)
    raise RejectionBudgetExceeded(
        "No path reached h=" + str(h) + " within " + str(max_attempts) + " attempts"
    )


def _conditioned_chunk(start: int, stop: int, law: EnvLaw, h: float, variant: str, seed: int, max_attempts: int):
    lengths = np.zeros(stop - start, dtype=np.int64)
    attempts = np.zeros(stop - start, dtype=np.int64)
    for offset, replicate in enumerate(range(start, stop)):
        sample = conditioned_walk_sample(
            law, h, variant, replicate_seed(seed, Streams.REJECTION, replicate), max_attempts
        )
        lengths[offset] = sample.hitting_length
        attempts[offset] = sample.attempts
    return lengths, attempts


def conditioned_law_check(
    law: EnvLaw,
    h: float,
    N: int,
    seed: int,
    threads: int = 1,
    site_cap: int = DEFAULT_SITE_CAP,
    max_attempts: int = DEFAULT_REJECTION_CAP,
) -> dict:
    """Confront rejection-sampled weak conditioned paths with T_up prefixes.

    Returns:
        dict: the KS statistic and p-value between the hitting lengths, and
        the acceptance rate times h with its standard error.
    """
    parts = run_chunks(
        _conditioned_chunk, chunk_bounds(N), threads, law, h, Conditioning.WEAK.value, seed, max_attempts
    )
    lengths = np.concatenate([part[0] for part in parts])
    attempts = np.concatenate([part[1] for part in parts])
    slopes = sample_slopes(law, h, N, seed, threads, site_cap)
    test = stats.ks_2samp(lengths, slopes["up_hits"])
    rate, rate_stderr = ratio_stderr(np.ones(attempts.size), attempts)
    return {
        "h": h,
        "N": N,
        "ks_statistic": float(test.statistic),
        "ks_pvalue": float(test.pvalue),
        "acceptance_scaled": rate * h,
        "acceptance_scaled_stderr": rate_stderr * h,
    }
