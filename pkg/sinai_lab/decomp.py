"""Left and right h-extrema, slopes and localization points of a potential.

The scan follows the alternating stopping times

    tau_{2i+1} = first k >= tau_{2i} with V(k) - min V[tau_{2i}, k] >= h,
    tau_{2i+2} = first k >= tau_{2i+1} with max V[tau_{2i+1}, k] - V(k) >= h,

with m_i the first argmin (odd i) or first argmax (even i) of V on
[tau_{i-1}, tau_i]. Starting the recursion at the left end of a window, every
m_i with i >= 2 is a left h-extremum whose witnesses lie inside the window;
m_1 is one as soon as the window holds a height-h witness to its left.
"""
import logging

import numpy as np

from .const import DEFAULT_FLANK
from .envgen import reflect_window, widen_window
from .exceptions import ExtensionBudgetExceeded, RangeError
from .models import (
    Decomposition,
    ExtremumRecord,
    LadderEpochs,
    PotentialWindow,
    SlopeView,
)
from .utils import Direction, ExtremumKind, Side, SlopeVariant

_LOGGER = logging.getLogger(__name__)

_FIRST_CHUNK = 64


def _first_excursion(values: np.ndarray, start: int, h: float, rising: bool) -> int:
    """First k >= start where values climbs h above its running minimum (or
    falls h below its running maximum); -1 when the array ends first."""
    size = values.size
    position = start
    chunk = _FIRST_CHUNK
    carry = np.inf if rising else -np.inf
    while position < size:
        stop = min(size, position + chunk)
        segment = values[position:stop]
        if rising:
            running = np.minimum(np.minimum.accumulate(segment), carry)
            hits = np.flatnonzero(segment - running >= h)
        else:
            running = np.maximum(np.maximum.accumulate(segment), carry)
            hits = np.flatnonzero(running - segment >= h)
        if hits.size:
            return position + int(hits[0])
        carry = running[-1]
        position = stop
        chunk *= 2
    return -1


def rise_time(values: np.ndarray, h: float) -> int:
    """d_Z(h): first t with Z(t) - min Z[0, t] >= h, or -1 if not reached."""
    return _first_excursion(values, 0, h, rising=True)


def _argext(segment: np.ndarray, minimum: bool, last: bool) -> int:
    if last:
        reverse = segment[::-1]
        return segment.size - 1 - int(np.argmin(reverse) if minimum else np.argmax(reverse))
    return int(np.argmin(segment) if minimum else np.argmax(segment))


def stopping_times(values: np.ndarray, h: float, count: int = None, last: bool = False):
    """Run the tau/m recursion from index 0.

    Args:
        values (np.ndarray): The path.
        h (float): The height.
        count (int): Stop after this many m_i; None runs to the end.
        last (bool): Use last instead of first argmin/argmax (starred m_i*).

    Returns:
        tuple[list[int], list[int]]: (m_1, m_2, ...) and (tau_1, tau_2, ...).
    """
    extrema, taus = [], []
    previous = 0
    while count is None or len(extrema) < count:
        rising = len(extrema) % 2 == 0
        tau = _first_excursion(values, previous, h, rising)
        if tau < 0:
            break
        extrema.append(previous + _argext(values[previous:tau + 1], rising, last))
        taus.append(tau)
        previous = tau
    return extrema, taus


def _certified_left(values: np.ndarray, h: float) -> list[tuple[int, ExtremumKind]]:
    """Array indices and kinds of the left h-extrema certified in ``values``."""
    extrema, _ = stopping_times(values, h)
    certified = []
    for i, index in enumerate(extrema):
        if i == 0 and (index == 0 or values[:index].max() < values[index] + h):
            continue
        certified.append((index, ExtremumKind.MIN if i % 2 == 0 else ExtremumKind.MAX))
    return certified


def _records(window: PotentialWindow, certified, first_rank: int, last_rank: int, origin_rank: int):
    return [
        ExtremumRecord(
            position=window.lo + certified[rank][0],
            kind=certified[rank][1],
            value=float(window.V[certified[rank][0]]),
            index=rank - origin_rank,
        )
        for rank in range(first_rank, last_rank + 1)
    ]


def scan_left_extrema(
    window: PotentialWindow, h: float, k_min: int = None, k_max: int = None, flank: int = DEFAULT_FLANK
) -> Decomposition:
    """Certified left h-extrema x_{k_min - flank} ... x_{k_max + flank}.

    The window is doubled on whichever side lacks certified extrema. With
    ``k_min = k_max = None`` every extremum certified in the given window is
    returned and the window is left untouched.

    Args:
        window (PotentialWindow): The potential.
        h (float): The height, > 0.
        k_min (int): First requested index.
        k_max (int): Last requested index.
        flank (int): Extra certified neighbors on each side.

    Returns:
        Decomposition: Indexed so that x_0 <= 0 < x_1.

    Raises:
        RangeError: If h <= 0 or k_min > k_max.
        ExtensionBudgetExceeded: If certification needs more sites than allowed.
    """
    if h <= 0:
        raise RangeError("Height must be positive, got " + str(h))
    if k_min is None or k_max is None:
        certified = _certified_left(window.V, h)
        at_or_left = sum(1 for index, _ in certified if window.lo + index <= 0)
        records = _records(window, certified, 0, len(certified) - 1, at_or_left - 1)
        return Decomposition(h=h, side=Side.LEFT, extrema=records, window=window)
    if k_min > k_max:
        raise RangeError("k_min must not exceed k_max")

    while True:
        certified = _certified_left(window.V, h)
        origin_rank = sum(1 for index, _ in certified if window.lo + index <= 0) - 1
        first_rank = origin_rank + k_min - flank
        last_rank = origin_rank + max(k_max + flank, 1)
        need_left = origin_rank < 0 or first_rank < 0
        need_right = last_rank > len(certified) - 1
        if not (need_left or need_right):
            records = _records(window, certified, first_rank, origin_rank + k_max + flank, origin_rank)
            return Decomposition(h=h, side=Side.LEFT, extrema=records, window=window)
        if not window.extensible:
            raise ExtensionBudgetExceeded(
                "Fixed window cannot certify x_" + str(k_min - flank) + " ... x_" + str(k_max + flank)
                + " at h=" + str(h)
            )
        window = widen_window(window, left=need_left, right=need_right)


def _left_min_witness(left: np.ndarray, value: float, h: float) -> bool:
    breaks = np.flatnonzero(left <= value)
    reach = left[:breaks[0]] if breaks.size else left
    return reach.size > 0 and reach.max() >= value + h


def _right_min_witness(right: np.ndarray, value: float, h: float) -> bool:
    breaks = np.flatnonzero(right < value)
    reach = right[:breaks[0]] if breaks.size else right
    return reach.size > 0 and reach.max() >= value + h


def _left_max_witness(left: np.ndarray, value: float, h: float) -> bool:
    breaks = np.flatnonzero(left >= value)
    reach = left[:breaks[0]] if breaks.size else left
    return reach.size > 0 and reach.min() <= value - h


def _right_max_witness(right: np.ndarray, value: float, h: float) -> bool:
    breaks = np.flatnonzero(right > value)
    reach = right[:breaks[0]] if breaks.size else right
    return reach.size > 0 and reach.min() <= value - h


def bruteforce_left_extrema(window: PotentialWindow, h: float) -> list[ExtremumRecord]:
    """Test every site of the window against the definition of a left h-extremum.

    Witnesses are restricted to the window. Quadratic in the window length.
    """
    values = window.V
    found = []
    for index in range(values.size):
        value = values[index]
        left = values[:index][::-1]
        right = values[index + 1:]
        if _left_min_witness(left, value, h) and _right_min_witness(right, value, h):
            found.append((index, ExtremumKind.MIN))
        elif _left_max_witness(left, value, h) and _right_max_witness(right, value, h):
            found.append((index, ExtremumKind.MAX))
    at_or_left = sum(1 for index, _ in found if window.lo + index <= 0)
    return _records(window, found, 0, len(found) - 1, at_or_left - 1)


def right_extrema(
    window: PotentialWindow, h: float, k_min: int = None, k_max: int = None, flank: int = DEFAULT_FLANK
) -> Decomposition:
    """Right h-extrema through x*_i(v, h) = -x_{1-i}(v(-.), h).

    Indexed so that x*_0 < 0 <= x*_1.
    """
    mirrored = reflect_window(window)
    if k_min is None or k_max is None:
        left = scan_left_extrema(mirrored, h)
    else:
        left = scan_left_extrema(mirrored, h, 1 - k_max, 1 - k_min, flank)
    records = [
        ExtremumRecord(position=-record.position, kind=record.kind, value=record.value, index=1 - record.index)
        for record in reversed(left.extrema)
    ]
    return Decomposition(h=h, side=Side.RIGHT, extrema=records, window=reflect_window(left.window))


def localization_b_h(decomposition: Decomposition) -> int:
    """b_h: x_0 if it is a left h-minimum, otherwise x_1."""
    if decomposition.side != Side.LEFT:
        raise RangeError("b_h is defined from left h-extrema")
    x0 = decomposition.extremum(0)
    if x0.kind == ExtremumKind.MIN:
        return x0.position
    return decomposition.position(1)


def kesten_b_h_K(window: PotentialWindow, h: float) -> int:
    """Kesten's localization point b_h^(K).

    With d_V = d_V(h) and d_- = d_{V(-.)}(h), b_V^+ is the first argmin of V on
    [0, d_V] and b_V^- the last argmin of V(-.) on [0, d_-]. The result is
    b_V^+ when max V[0, d_V] < max V(-.)[0, d_-] and -b_V^- otherwise.
    """
    if h <= 0:
        raise RangeError("Height must be positive, got " + str(h))
    while True:
        origin = -window.lo
        forward = window.V[origin:]
        backward = window.V[:origin + 1][::-1]
        d_forward = rise_time(forward, h)
        d_backward = rise_time(backward, h)
        if d_forward >= 0 and d_backward >= 0:
            break
        if not window.extensible:
            raise ExtensionBudgetExceeded("Fixed window does not contain d_V(h) and d_V-(h)")
        window = widen_window(window, left=d_backward < 0, right=d_forward < 0)
    up = forward[:d_forward + 1]
    down = backward[:d_backward + 1]
    b_plus = _argext(up, minimum=True, last=False)
    b_minus = _argext(down, minimum=True, last=True)
    if up.max() < down.max():
        return b_plus
    return -b_minus


def extract_canonical_slopes(
    window: PotentialWindow, h: float, variant: SlopeVariant = SlopeVariant.PLAIN
) -> tuple[SlopeView, SlopeView]:
    """T_up = V[m_1, m_2] - V(m_1) and T_down = V[m_2, m_3] - V(m_2) from the
    recursion on (V(k), k >= 0); the starred variant uses m_i*."""
    variant = SlopeVariant(variant)
    while True:
        forward = window.V[-window.lo:]
        extrema, _ = stopping_times(forward, h, count=3, last=variant == SlopeVariant.STARRED)
        if len(extrema) == 3:
            break
        if not window.extensible:
            raise ExtensionBudgetExceeded("Fixed window does not contain m_3 at h=" + str(h))
        window = widen_window(window, left=False, right=True)
    m1, m2, m3 = extrema
    upward = forward[m1:m2 + 1] - forward[m1]
    downward = forward[m2:m3 + 1] - forward[m2]
    return (
        SlopeView(values=upward, direction=Direction.UPWARD, h=h),
        SlopeView(values=downward, direction=Direction.DOWNWARD, h=h),
    )


def ladder_epochs(window: PotentialWindow, h: float) -> LadderEpochs:
    """Weak descending ladder epochs of (V(k), k >= 0) up to the first excursion of height h.

    e_0 = 0 and e_{i+1} is the first k > e_i with V(k) <= V(e_i). ``heights``
    holds H_i = max V[e_i, e_{i+1}] - V(e_i) for i < L, where L is the first
    index whose excursion reaches h; m_1* = e_L.
    """
    if h <= 0:
        raise RangeError("Height must be positive, got " + str(h))
    epochs, heights = [0], []
    while True:
        forward = window.V[-window.lo:]
        current = epochs[-1]
        outcome = _ladder_step(forward, current, h)
        if outcome is None:
            if not window.extensible:
                raise ExtensionBudgetExceeded("Fixed window ends inside a ladder excursion")
            window = widen_window(window, left=False, right=True)
            continue
        following, rose = outcome
        if rose:
            return LadderEpochs(epochs=epochs, heights=heights, L=len(epochs) - 1, m1_star=current)
        heights.append(float(forward[current:following + 1].max() - forward[current]))
        epochs.append(following)


def _ladder_step(values: np.ndarray, start: int, h: float):
    base = values[start]
    position = start + 1
    chunk = _FIRST_CHUNK
    while position < values.size:
        stop = min(values.size, position + chunk)
        segment = values[position:stop]
        hits = np.flatnonzero((segment <= base) | (segment - base >= h))
        if hits.size:
            k = position + int(hits[0])
            return k, bool(values[k] - base >= h)
        position = stop
        chunk *= 2
    return None


def zeta(slope):
    """zeta(T)(i) = T(l - i) - T(l); flips the direction of a slope."""
    if isinstance(slope, SlopeView):
        flipped = Direction.DOWNWARD if slope.direction == Direction.UPWARD else Direction.UPWARD
        return SlopeView(values=zeta(slope.values), direction=flipped, h=slope.h)
    values = np.asarray(slope, dtype=float)
    return values[::-1] - values[-1] + 0.0


def glue(f, g) -> np.ndarray:
    """Glue(f, g): f on its domain, then the increments of g from f's endpoint."""
    first = np.asarray(f.values if isinstance(f, SlopeView) else f, dtype=float)
    second = np.asarray(g.values if isinstance(g, SlopeView) else g, dtype=float)
    return np.concatenate([first, first[-1] + second[1:] - second[0]])


def slope(decomposition: Decomposition, i: int) -> SlopeView:
    """Translated slope theta(T_i): V on [x_i, x_{i+1}] minus V(x_i)."""
    start = decomposition.extremum(i)
    stop = decomposition.extremum(i + 1)
    window = decomposition.window
    values = window.segment(start.position, stop.position) - start.value
    upward = start.kind == ExtremumKind.MIN
    return SlopeView(
        values=values,
        direction=Direction.UPWARD if upward else Direction.DOWNWARD,
        h=decomposition.h,
    )


def central_valley(decomposition: Decomposition) -> tuple[int, int]:
    """(M-, M+): the two left h-maxima around b_h."""
    bottom = localization_b_h(decomposition)
    if bottom <= 0:
        return decomposition.position(-1), decomposition.position(1)
    return decomposition.position(0), decomposition.position(2)


def reconstruct(decomposition: Decomposition) -> np.ndarray:
    """Glue the translated slopes from (x_{k_min}, V(x_{k_min})); equals V on
    [x_{k_min}, x_{k_max}]."""
    path = np.array([decomposition.extrema[0].value])
    for i in range(decomposition.k_min, decomposition.k_max):
        path = glue(path, slope(decomposition, i))
    return path
