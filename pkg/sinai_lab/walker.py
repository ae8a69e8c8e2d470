"""Trajectories of the walk in a fixed environment and the valley coupling."""
import logging
import math

import numpy as np

from .decomp import central_valley, localization_b_h, scan_left_extrema
from .envgen import ensure_window, sample_window, widen_window
from .exceptions import RangeError
from .models import (
    CapExceeded,
    CouplingRecord,
    Decomposition,
    EnvLaw,
    PotentialWindow,
    WalkResult,
)
from .quenched import reflected_invariant
from .utils import HitVariant, Streams, stream_generator

_LOGGER = logging.getLogger(__name__)

_UNIFORM_BLOCK = 1 << 16


class _Cursor:
    """Walker position over a window that grows on demand."""

    def __init__(self, window: PotentialWindow):
        self.window = window
        self._load()

    def _load(self):
        self.lo = self.window.lo
        self.hi = self.window.hi
        self.omega = self.window.omega.tolist()

    def omega_at(self, site: int) -> float:
        while site <= self.lo or site >= self.hi:
            self.window = widen_window(self.window, left=site <= self.lo, right=site >= self.hi)
            self._load()
        return self.omega[site - self.lo]


def _uniform_blocks(generator: np.random.Generator, count: int):
    while count > 0:
        size = min(count, _UNIFORM_BLOCK)
        yield from generator.random(size).tolist()
        count -= size


def simulate_walk(
    window: PotentialWindow,
    start: int,
    n: int,
    seed: int,
    record=None,
    keep_path: bool = False,
    dump_to: str = None,
) -> WalkResult:
    """Simulate n steps of S under P_omega^start.

    One uniform per step is drawn from the walk stream of ``seed``; the window
    is extended whenever the walker reaches its edge.

    Args:
        window (PotentialWindow): The environment.
        start (int): S_0.
        n (int): Number of steps.
        seed (int): Seed of the walk stream.
        record: Optional iterable of sites whose first hitting times are kept.
        keep_path (bool): Return the trajectory.
        dump_to (str): Optional file receiving the steps, one bit each (1 = right).

    Returns:
        WalkResult: Endpoint, the (possibly extended) window and the records.
    """
    if n < 0:
        raise RangeError("Step count must be non-negative, got " + str(n))
    targets = set(record or ())
    first_hits = {start: 0} if start in targets else {}
    cursor = _Cursor(window)
    generator = stream_generator(seed, Streams.WALK.value)
    position = start
    path = [start] if keep_path or dump_to else None
    for time, uniform in enumerate(_uniform_blocks(generator, n), start=1):
        position += 1 if uniform < cursor.omega_at(position) else -1
        if path is not None:
            path.append(position)
        if position in targets and position not in first_hits:
            first_hits[position] = time
    trajectory = np.asarray(path, dtype=np.int64) if path is not None else None
    if dump_to:
        dump_steps(trajectory, dump_to)
    return WalkResult(
        endpoint=position,
        window=cursor.window,
        first_hits=first_hits,
        path=trajectory if keep_path else None,
    )


def dump_steps(path: np.ndarray, file_path: str) -> None:
    """Write the steps of a trajectory as packed bits (1 = right)."""
    np.packbits(np.diff(path) > 0).tofile(file_path)
    _LOGGER.debug("Dumped %d steps to %s", path.size - 1, file_path)


def hitting_time(
    window: PotentialWindow,
    start: int,
    target,
    cap: int,
    seed: int,
    variant: HitVariant = HitVariant.HIT,
):
    """First k >= 0 (``hit``) or k >= 1 (``return``) with S_k in the target.

    Args:
        window (PotentialWindow): The environment.
        start (int): S_0.
        target: A site or an iterable of sites.
        cap (int): Largest time examined, > 0.
        seed (int): Seed of the walk stream.
        variant (HitVariant): ``hit`` or ``return``.

    Returns:
        int | CapExceeded: The time, or a censoring marker when the cap is reached.
    """
    if cap <= 0:
        raise RangeError("Cap must be positive, got " + str(cap))
    variant = HitVariant(variant)
    targets = {target} if isinstance(target, (int, np.integer)) else set(target)
    if variant == HitVariant.HIT and start in targets:
        return 0
    cursor = _Cursor(window)
    generator = stream_generator(seed, Streams.WALK.value)
    position = start
    for time, uniform in enumerate(_uniform_blocks(generator, cap), start=1):
        position += 1 if uniform < cursor.omega_at(position) else -1
        if position in targets:
            return time
    return CapExceeded(cap=cap, position=position)


def batch_endpoints(window: PotentialWindow, start: int, n: int, seed: int, replicates: int) -> np.ndarray:
    """Endpoints S_n of independent walks in one environment, vectorized over walks."""
    generator = stream_generator(seed, Streams.WALK.value)
    positions = np.full(replicates, start, dtype=np.int64)
    window = ensure_window(window, start - 1, start + 1)
    omega = window.omega
    slack = 0
    for _ in range(n):
        if slack <= 0:
            low, high = int(positions.min()), int(positions.max())
            while low <= window.lo or high >= window.hi:
                window = widen_window(window, left=low <= window.lo, right=high >= window.hi)
            omega = window.omega
            slack = min(low - window.lo, window.hi - high)
        right = generator.random(replicates) < omega[positions - window.lo]
        positions += np.where(right, 1, -1)
        slack -= 1
    return positions


def annealed_endpoints(
    law: EnvLaw, env_seeds, start: int, n: int, seed: int, site_cap: int, half_width: int = None
) -> np.ndarray:
    """Endpoints of one walk per environment, vectorized over environments.

    All environments share the same half-width, doubled whenever a walker
    reaches the edge.
    """
    env_seeds = list(env_seeds)
    count = len(env_seeds)
    if half_width is None:
        half_width = max(64, int(4 * (math.log(max(n, 3)) / law.sigma) ** 2))
    half_width = max(half_width, abs(start) + 2)
    generator = stream_generator(seed, Streams.WALK.value)
    rows = np.arange(count)
    positions = np.full(count, start, dtype=np.int64)

    def build(width):
        return np.stack([sample_window(law, env_seed, -width, width, site_cap).omega for env_seed in env_seeds])

    omega = build(half_width)
    slack = half_width - abs(start)
    for _ in range(n):
        if slack <= 0:
            reach = int(np.abs(positions).max())
            while reach >= half_width:
                half_width *= 2
                omega = build(half_width)
            slack = half_width - reach
        right = generator.random(count) < omega[rows, positions + half_width]
        positions += np.where(right, 1, -1)
        slack -= 1
    return positions


def parity_adjusted_bottom(b: int, n: int) -> int:
    """b-hat(n) = 2 floor(b / 2) + 1_{n odd}."""
    return 2 * (b // 2) + (n % 2)


def simulate_coupling(
    window: PotentialWindow,
    n: int,
    seed: int,
    decomposition: Decomposition = None,
    keep_paths: bool = False,
) -> CouplingRecord:
    """Run S from b-hat(n) and the reflected walk from nu-hat together for n steps.

    The walks move independently until they meet, move together while S stays
    strictly inside (M-, M+), and independently again once S reaches M- or M+.
    Each step draws one uniform from each walker's stream; the reflected start
    takes one extra draw from its own stream.
    """
    if n < 3:
        raise RangeError("Coupling needs n >= 3, got " + str(n))
    if decomposition is None:
        decomposition = scan_left_extrema(window, math.log(n), -1, 2, flank=0)
    window = decomposition.window
    bottom = localization_b_h(decomposition)
    M_minus, M_plus = central_valley(decomposition)
    start = parity_adjusted_bottom(bottom, n)
    nu_hat = reflected_invariant(window, n % 2, M_minus, M_plus)

    walk_stream = stream_generator(seed, Streams.COUPLING_WALK.value)
    reflected_stream = stream_generator(seed, Streams.COUPLING_REFLECTED.value)
    cumulative = np.cumsum(nu_hat.weights)
    pick = int(np.searchsorted(cumulative, reflected_stream.random() * cumulative[-1], side="right"))
    reflected_start = int(nu_hat.sites[min(pick, nu_hat.sites.size - 1)])

    cursor = _Cursor(window)
    s, shat = start, reflected_start
    tau_meet = 0 if s == shat else None
    tau_exit = 0 if s in (M_minus, M_plus) else None
    s_path = [s] if keep_paths else None
    shat_path = [shat] if keep_paths else None
    walk_uniforms = _uniform_blocks(walk_stream, n)
    reflected_uniforms = _uniform_blocks(reflected_stream, n)
    for time in range(1, n + 1):
        u = next(walk_uniforms)
        v = next(reflected_uniforms)
        locked = tau_meet is not None and tau_exit is None
        step = 1 if u < cursor.omega_at(s) else -1
        s += step
        if locked:
            shat += step
        elif shat == M_minus:
            shat += 1
        elif shat == M_plus:
            shat -= 1
        else:
            shat += 1 if v < cursor.omega_at(shat) else -1
        if tau_meet is None and s == shat:
            tau_meet = time
        if tau_exit is None and s in (M_minus, M_plus):
            tau_exit = time
        if keep_paths:
            s_path.append(s)
            shat_path.append(shat)

    return CouplingRecord(
        tau_meet=tau_meet,
        tau_exit=tau_exit,
        S_endpoint=s,
        Shat_endpoint=shat,
        horizon=n,
        start=start,
        Shat_start=reflected_start,
        M_minus=M_minus,
        M_plus=M_plus,
        S_path=np.asarray(s_path, dtype=np.int64) if keep_paths else None,
        Shat_path=np.asarray(shat_path, dtype=np.int64) if keep_paths else None,
    )
