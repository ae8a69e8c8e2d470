"""Environment events around the central valley at time n."""
import logging
import math

import numpy as np

from ..const import DEFAULT_SITE_CAP
from ..decomp import localization_b_h, scan_left_extrema
from ..envgen import ensure_window, initial_half_width, sample_window
from ..exceptions import ExtensionBudgetExceeded, RangeError
from ..models import EnvironmentSurvey, EnvLaw, EventParams, EventProfile, PotentialWindow
from ..utils import Streams, binomial_stderr, replicate_seed
from .parallel import chunk_bounds, run_chunks

_LOGGER = logging.getLogger(__name__)


def event_scales(n: int, params: EventParams) -> tuple[float, float, int]:
    """(h_n, h-tilde_n, Gamma_n) for n >= 3."""
    if n < 3:
        raise RangeError("Events need n >= 3, got " + str(n))
    log_n = math.log(n)
    loglog = math.log(log_n)
    h_n = log_n - params.c1 * loglog
    return h_n, h_n - params.c1 * loglog, int(math.floor(log_n ** (4.0 / 3.0 + params.delta1)))


def resolve_event_params(spec) -> EventParams:
    """EventParams from ``"strict"``, ``"desk"``, a mapping or an instance.

    A mapping may carry ``preset`` and overrides of single constants.
    """
    if isinstance(spec, EventParams):
        return spec
    if spec is None or spec == "strict":
        return EventParams()
    if spec == "desk":
        return EventParams.desk()
    if isinstance(spec, dict):
        values = dict(spec)
        preset = values.pop("preset", "strict")
        base = EventParams.desk() if preset == "desk" else EventParams()
        try:
            return EventParams(**{**base.model_dump(), **values})
        except ValueError as exception:
            raise RangeError("Invalid event parameters: " + str(exception)) from exception
    raise RangeError("Unknown event parameters " + str(spec))


def _covering(window: PotentialWindow, lo: int, hi: int):
    """The window extended to [lo, hi], or None when a fixed window falls short."""
    if window.contains(lo, hi):
        return window
    if not window.extensible:
        return None
    return ensure_window(window, lo, hi)


def _uncertified(n, params, scales, window) -> EnvironmentSurvey:
    h_n, h_tilde, gamma_n = scales
    return EnvironmentSurvey(
        n=n, params=params, h_n=h_n, h_tilde=h_tilde, gamma_n=gamma_n, certified=False, window=window
    )


def survey_environment(window: PotentialWindow, n: int, params: EventParams = None) -> EnvironmentSurvey:
    """Evaluate the parts of the events at time n that do not depend on z.

    A fixed window that cannot certify the required extrema yields a survey
    outside every event; an extensible window is grown as needed.

    Raises:
        ExtensionBudgetExceeded: If an extensible window hits its site cap.
    """
    params = resolve_event_params(params)
    scales = event_scales(n, params)
    h_n, h_tilde, gamma_n = scales
    log_n = math.log(n)
    loglog = math.log(log_n)
    radius = params.extrema_radius

    try:
        decomposition = scan_left_extrema(window, log_n, -radius, radius, flank=0)
    except ExtensionBudgetExceeded:
        if window.extensible:
            raise
        _LOGGER.debug("Fixed window cannot certify x_-%d ... x_%d at h=log n", radius, radius)
        return _uncertified(n, params, scales, window)
    window = decomposition.window
    b = localization_b_h(decomposition)
    if b <= 0:
        M_minus, M_plus = decomposition.position(-1), decomposition.position(1)
    else:
        M_minus, M_plus = decomposition.position(0), decomposition.position(2)
    spread = log_n ** (2.0 + params.delta1)
    E5 = -spread <= decomposition.position(-radius) and decomposition.position(radius) <= spread
    between = window.segment(min(b, 0), max(b, 0))

    E6 = False
    covered = _covering(window, b - gamma_n, b + gamma_n)
    if covered is not None:
        window = covered
        E6 = bool(np.max(window.segment(b - gamma_n, b + gamma_n)) - window.v(b) < log_n)

    E3 = False
    if h_tilde > 0:
        slopes = params.slope_radius
        try:
            fine = scan_left_extrema(window, h_tilde, -slopes, slopes + 1, flank=0)
        except ExtensionBudgetExceeded:
            if window.extensible:
                raise
            fine = None
        if fine is not None:
            window = fine.window
            threshold = log_n + params.c2 * loglog
            E3 = all(
                abs(fine.extremum(i + 1).value - fine.extremum(i).value) >= threshold
                for i in range(-slopes, slopes + 1)
            )

    return EnvironmentSurvey(
        n=n,
        params=params,
        h_n=h_n,
        h_tilde=h_tilde,
        gamma_n=gamma_n,
        certified=True,
        window=window,
        b=b,
        M_minus=M_minus,
        M_plus=M_plus,
        x0_value=decomposition.extremum(0).value,
        x1_value=decomposition.extremum(1).value,
        valley_max=float(between.max()),
        E3=E3,
        E5=bool(E5),
        E6=E6,
    )


def profile_at(survey: EnvironmentSurvey, z: int) -> EventProfile:
    """Complete a survey with the z-dependent events E4(z), E7(z) and E_C(z)."""
    common = {
        "n": survey.n,
        "z": z,
        "params": survey.params,
        "h_n": survey.h_n,
        "h_tilde": survey.h_tilde,
        "gamma_n": survey.gamma_n,
    }
    if not survey.certified:
        return EventProfile(
            **common,
            b=None,
            M_minus=None,
            M_plus=None,
            E_minus=False,
            E_plus=False,
            E3=False,
            E4=False,
            E5=False,
            E6=False,
            E7=False,
            E_C=False,
        )
    loglog = math.log(math.log(survey.n))
    b = survey.b
    E4 = False
    window = _covering(survey.window, z, z)
    if window is not None and window.v(z) - window.v(b) >= 5.0 * loglog:
        E4 = True
    if survey.E_minus and survey.valley_max < survey.x1_value - 9.0 * loglog:
        E4 = True
    if survey.E_plus and survey.valley_max < survey.x0_value - 9.0 * loglog:
        E4 = True
    E7 = abs(b - z) <= survey.gamma_n
    return EventProfile(
        **common,
        b=b,
        M_minus=survey.M_minus,
        M_plus=survey.M_plus,
        E_minus=survey.E_minus,
        E_plus=survey.E_plus,
        E3=survey.E3,
        E4=E4,
        E5=survey.E5,
        E6=survey.E6,
        E7=E7,
        E_C=survey.E3 and E4 and survey.E5 and survey.E6 and E7,
    )


def classify_events(window: PotentialWindow, n: int, z: int, params: EventParams = None) -> EventProfile:
    """Evaluate E-, E+, E3, E4(z), E5, E6, E7(z) and E_C(z) literally from their definitions.

    Args:
        window (PotentialWindow): The environment.
        n (int): Time, >= 3.
        z (int): Site.
        params (EventParams): Constants; strict defaults when None.

    Returns:
        EventProfile: The flags and the derived scales.
    """
    return profile_at(survey_environment(window, n, params), z)


def _event_chunk(start: int, stop: int, law: EnvLaw, n: int, z: int, params: EventParams, seed: int, site_cap: int):
    names = ("E_minus", "E3", "E4", "E5", "E6", "E7", "E_C")
    flags = np.zeros((stop - start, len(names)), dtype=bool)
    valid = np.ones(stop - start, dtype=bool)
    half_width = min(initial_half_width(law, math.log(n)), site_cap)
    for offset, replicate in enumerate(range(start, stop)):
        env_seed = replicate_seed(seed, Streams.EVENTS, replicate)
        try:
            window = sample_window(law, env_seed, -half_width, half_width, site_cap)
            profile = classify_events(window, n, z, params)
        except ExtensionBudgetExceeded as exception:
            _LOGGER.debug("Event replicate %d excluded: %s", replicate, exception)
            valid[offset] = False
            continue
        flags[offset] = [getattr(profile, name) for name in names]
    return flags, valid


def event_frequencies(
    law: EnvLaw,
    n: int,
    N: int,
    seed: int,
    z: int = 0,
    params: EventParams = None,
    threads: int = 1,
    site_cap: int = DEFAULT_SITE_CAP,
) -> dict:
    """Frequencies of each event over N environments at time n and site z."""
    params = resolve_event_params(params)
    parts = run_chunks(_event_chunk, chunk_bounds(N), threads, law, n, z, params, seed, site_cap)
    flags = np.concatenate([part[0] for part in parts])
    valid = np.concatenate([part[1] for part in parts])
    flags = flags[valid]
    count = int(valid.sum())
    names = ("E_minus", "E3", "E4", "E5", "E6", "E7", "E_C")
    rows = []
    for column, name in enumerate(names):
        frequency = float(flags[:, column].mean()) if count else math.nan
        rows.append({"event": name, "estimate": frequency, "stderr": binomial_stderr(frequency, count)})
    return {"n": n, "z": z, "valid": count, "excluded": N - count, "rows": rows}
