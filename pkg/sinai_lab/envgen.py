"""Environment laws and site-keyed potential windows."""
import logging
import math

import numpy as np
from scipy.special import expit

from .const import DEFAULT_SITE_CAP
from .exceptions import ExtensionBudgetExceeded, InvalidLaw, RangeError
from .models import EnvLaw, Lattice, PotentialWindow
from .utils import LawKind, site_uniforms

_LOGGER = logging.getLogger(__name__)

MIN_GROWTH = 64


def make_env_law(kind, params) -> EnvLaw:
    """Build an admissible environment law.

    Args:
        kind: A ``LawKind`` or its string value.
        params: The law parameter (p for two-point, c for logistic-uniform),
            either as a number or as a ``{"param": value}`` mapping.

    Returns:
        EnvLaw: The law with sigma, epsilon0, c0 and lattice descriptor.

    Raises:
        InvalidLaw: If sigma vanishes or ellipticity fails.
    """
    try:
        kind = LawKind(kind)
    except ValueError as exception:
        raise InvalidLaw("Unknown law kind " + str(kind)) from exception
    param = float(params["param"] if isinstance(params, dict) else params)
    if not math.isfinite(param):
        raise InvalidLaw("Law parameter must be finite, got " + str(param))

    if kind == LawKind.TWO_POINT:
        if not 0.0 < param < 1.0:
            raise InvalidLaw("Two-point law needs p in (0, 1/2) or (1/2, 1), got " + str(param))
        if param == 0.5:
            raise InvalidLaw("Two-point law with p = 1/2 has sigma = 0")
        unit = math.log((1.0 - param) / param)
        sigma = abs(unit)
        epsilon0 = min(param, 1.0 - param)
        return EnvLaw(
            kind=kind,
            param=param,
            epsilon0=epsilon0,
            sigma=sigma,
            c0=math.log((1.0 - epsilon0) / epsilon0),
            lattice=Lattice(span=2.0 * sigma, shift=sigma),
            unit=unit,
        )

    if param <= 0.0:
        raise InvalidLaw("Logistic-uniform law needs c > 0, got " + str(param))
    epsilon0 = float(expit(-param))
    return EnvLaw(
        kind=kind,
        param=param,
        epsilon0=epsilon0,
        sigma=param / math.sqrt(3.0),
        c0=param,
        lattice=None,
        unit=None,
    )


def omega_from_uniforms(law: EnvLaw, uniforms: np.ndarray) -> np.ndarray:
    """Right-step probabilities for the given site uniforms."""
    if law.kind == LawKind.TWO_POINT:
        return np.where(uniforms < 0.5, law.param, 1.0 - law.param)
    return expit(-law.param * (2.0 * uniforms - 1.0))


def potential_path(law: EnvLaw, uniforms: np.ndarray, axis: int = -1) -> np.ndarray:
    """Potential path from 0 driven by one uniform per step.

    Lattice laws add integer steps and scale once, so equal potential values
    compare equal exactly.

    Args:
        law (EnvLaw): The law of log rho.
        uniforms (np.ndarray): Step uniforms; the last axis is time.
        axis (int): The time axis.

    Returns:
        np.ndarray: The partial sums without the leading 0.
    """
    if law.kind == LawKind.TWO_POINT:
        steps = np.where(uniforms < 0.5, 1, -1).astype(np.int64)
        return np.cumsum(steps, axis=axis) * law.unit + 0.0
    return np.cumsum(law.param * (2.0 * uniforms - 1.0), axis=axis)


def _two_sided_potential(law: EnvLaw, uniforms: np.ndarray, lo: int) -> np.ndarray:
    origin = -lo
    right = potential_path(law, uniforms[origin + 1:])
    left = -potential_path(law, uniforms[origin:0:-1]) + 0.0
    return np.concatenate([left[::-1], [0.0], right])


def _freeze(*arrays: np.ndarray) -> None:
    for array in arrays:
        array.setflags(write=False)


def _check_cap(lo: int, hi: int, site_cap: int) -> None:
    if -lo > site_cap or hi > site_cap:
        raise ExtensionBudgetExceeded(
            "Window [" + str(lo) + ", " + str(hi) + "] crosses the site cap " + str(site_cap)
        )


def sample_window(
    law: EnvLaw, master_seed: int, lo: int, hi: int, site_cap: int = DEFAULT_SITE_CAP
) -> PotentialWindow:
    """Realize omega and V on ``[lo, hi]``.

    omega_x depends only on (master_seed, x), so two windows with the same
    seed agree on their common sites bit for bit.

    Raises:
        RangeError: If lo <= 0 <= hi fails.
        ExtensionBudgetExceeded: If the range crosses ``site_cap``.
    """
    if not lo <= 0 <= hi:
        raise RangeError("Window needs lo <= 0 <= hi, got [" + str(lo) + ", " + str(hi) + "]")
    _check_cap(lo, hi, site_cap)
    uniforms = site_uniforms(master_seed, lo, hi)
    omega = omega_from_uniforms(law, uniforms)
    potential = _two_sided_potential(law, uniforms, lo)
    _freeze(omega, potential)
    return PotentialWindow(
        law=law, master_seed=master_seed, lo=lo, hi=hi, omega=omega, V=potential, site_cap=site_cap
    )


def window_from_values(values, lo: int, law: EnvLaw = None) -> PotentialWindow:
    """Inject a fixed potential on ``[lo, lo + len(values) - 1]``.

    omega_x = 1 / (1 + exp(V(x) - V(x - 1))) inside the window; omega_lo is
    unknown and stored as NaN.
    """
    potential = np.array(values, dtype=float)
    hi = lo + potential.size - 1
    if not lo <= 0 <= hi:
        raise RangeError("Injected window must contain 0, got [" + str(lo) + ", " + str(hi) + "]")
    omega = np.concatenate([[np.nan], expit(-np.diff(potential))])
    _freeze(omega, potential)
    return PotentialWindow(law=law, master_seed=None, lo=lo, hi=hi, omega=omega, V=potential)


def _mirror(parent: PotentialWindow) -> PotentialWindow:
    """V(-x) of ``parent``; omega'_x = 1 - omega_{1-x}."""
    if parent.extensible and parent.reflected:
        return sample_window(parent.law, parent.master_seed, -parent.hi, -parent.lo, parent.site_cap)
    if parent.extensible:
        beyond = omega_from_uniforms(parent.law, site_uniforms(parent.master_seed, parent.hi + 1, parent.hi + 1))
    else:
        beyond = np.array([np.nan])
    omega = 1.0 - np.concatenate([parent.omega[1:], beyond])[::-1]
    potential = parent.V[::-1].copy()
    _freeze(omega, potential)
    return PotentialWindow(
        law=parent.law,
        master_seed=parent.master_seed,
        lo=-parent.hi,
        hi=-parent.lo,
        omega=omega,
        V=potential,
        reflected=not parent.reflected,
        site_cap=parent.site_cap,
    )


def reflect_window(window: PotentialWindow) -> PotentialWindow:
    """Return the window of V(-x)."""
    return _mirror(window)


def extend_window(
    window: PotentialWindow, new_lo: int, new_hi: int, site_cap: int = None
) -> PotentialWindow:
    """Grow a window to ``[new_lo, new_hi]``.

    Values on the old range are unchanged; new sites come from the
    site-keyed generator.

    Raises:
        RangeError: If the new range does not contain the old one.
        ExtensionBudgetExceeded: If the window is fixed or the cap is crossed.
    """
    if new_lo > window.lo or new_hi < window.hi:
        raise RangeError("Extension must contain the current window")
    if new_lo == window.lo and new_hi == window.hi:
        return window
    cap = window.site_cap if site_cap is None else site_cap
    if not window.extensible:
        raise ExtensionBudgetExceeded(
            "Fixed window [" + str(window.lo) + ", " + str(window.hi) + "] cannot reach ["
            + str(new_lo) + ", " + str(new_hi) + "]"
        )
    _check_cap(new_lo, new_hi, cap)
    _LOGGER.debug("Extending window [%d, %d] to [%d, %d]", window.lo, window.hi, new_lo, new_hi)
    if window.reflected:
        parent = sample_window(window.law, window.master_seed, -new_hi, -new_lo, cap)
        return _mirror(parent)
    return sample_window(window.law, window.master_seed, new_lo, new_hi, cap)


def restrict_window(window: PotentialWindow, lo: int, hi: int) -> PotentialWindow:
    """Sub-window on ``[lo, hi]`` keeping the seed."""
    if not (window.lo <= lo <= 0 <= hi <= window.hi):
        raise RangeError("Restriction must lie in the window and contain 0")
    start, stop = lo - window.lo, hi - window.lo + 1
    return window.model_copy(update={"lo": lo, "hi": hi, "omega": window.omega[start:stop], "V": window.V[start:stop]})


def ensure_window(window: PotentialWindow, lo: int, hi: int) -> PotentialWindow:
    """Return a window covering ``[lo, hi]``, extending only when needed."""
    if window.contains(lo, hi):
        return window
    return extend_window(window, min(lo, window.lo, 0), max(hi, window.hi, 0))


def widen_window(window: PotentialWindow, left: bool = True, right: bool = True) -> PotentialWindow:
    """Double the window on the requested sides."""
    growth = max(MIN_GROWTH, window.hi - window.lo + 1)
    new_lo = window.lo - growth if left else window.lo
    new_hi = window.hi + growth if right else window.hi
    cap = window.site_cap
    if window.extensible:
        new_lo, new_hi = max(new_lo, -cap), min(new_hi, cap)
        if new_lo == window.lo and new_hi == window.hi:
            raise ExtensionBudgetExceeded("Window already spans the site cap " + str(cap))
    return extend_window(window, new_lo, new_hi)


def initial_half_width(law: EnvLaw, h: float, slopes: float = 4.0) -> int:
    """Starting half-width for a window that should hold a few h-slopes."""
    return int(max(MIN_GROWTH, math.ceil(slopes * (h / law.sigma) ** 2)))
