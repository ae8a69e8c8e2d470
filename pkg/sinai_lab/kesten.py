"""The Kesten-Golosov limit density and the local limit predictions built on it.

    phi(x) = (2/pi) sum_{k>=0} (-1)^k / (2k+1) exp(-(2k+1)^2 pi^2 |x| / 8)

The terms alternate and decrease in magnitude, so the first omitted term
bounds the truncation error. For small |x| the damping only starts near
k = sqrt(8 / (pi^2 |x|)), hence O(|x|^{-1/2}) terms.
"""
import math

import numpy as np
from scipy import integrate

from .const import DEFAULT_TOL
from .exceptions import RangeError
from .models import DensityEval
from .utils import LltMode

_TERMS_PER_BATCH = 256
_DECAY = math.pi**2 / 8.0


def phi_inf(x: float, tol: float = DEFAULT_TOL) -> DensityEval:
    """Evaluate the limit density at ``x``.

    Partial sums stop once the next term, scaled by 2/pi, is at most ``tol``;
    that scaled term is returned as ``error_bound``. phi(0) = 1/2 is returned
    directly.

    Args:
        x (float): The point.
        tol (float): Target accuracy, > 0.

    Returns:
        DensityEval: value, number of terms and remainder bound.
    """
    if tol <= 0:
        raise RangeError("Tolerance must be positive, got " + str(tol))
    distance = abs(float(x))
    if distance == 0.0:
        return DensityEval(x=float(x), value=0.5, terms_used=0, error_bound=0.0)
    total = 0.0
    first = 0
    while True:
        k = np.arange(first, first + _TERMS_PER_BATCH)
        odd = 2 * k + 1
        magnitudes = np.exp(-(odd.astype(float) ** 2) * _DECAY * distance) / odd
        small = np.flatnonzero(magnitudes * (2.0 / math.pi) <= tol)
        if small.size:
            used = int(small[0])
            signs = np.where(k[:used] % 2 == 0, 1.0, -1.0)
            total += float(np.sum(signs * magnitudes[:used]))
            return DensityEval(
                x=float(x),
                value=(2.0 / math.pi) * total,
                terms_used=first + used,
                error_bound=(2.0 / math.pi) * float(magnitudes[used]),
            )
        signs = np.where(k % 2 == 0, 1.0, -1.0)
        total += float(np.sum(signs * magnitudes))
        first += _TERMS_PER_BATCH


def tail_cutoff(tol: float) -> float:
    """X with (2/pi)(8/pi^2) e^{-pi^2 X / 8} < tol / 10, the mass bound beyond X."""
    return math.log((16.0 / math.pi**3) * 10.0 / tol) / _DECAY


def phi_cdf(x: float, tol: float = DEFAULT_TOL) -> float:
    """Integral of the density from the cutoff -X to ``x`` by adaptive quadrature."""
    if tol <= 0:
        raise RangeError("Tolerance must be positive, got " + str(tol))
    cutoff = tail_cutoff(tol)
    x = float(x)
    if x <= -cutoff:
        return 0.0
    upper = min(x, cutoff)

    def density(point):
        return phi_inf(point, tol / 10.0).value

    options = {"epsabs": tol / 10.0, "epsrel": 0.0, "limit": 200}
    left, _ = integrate.quad(density, -cutoff, min(upper, 0.0), **options)
    if upper <= 0.0:
        return left
    right, _ = integrate.quad(density, 0.0, upper, **options)
    return left + right


def llt_prediction(mode, argument: float, sigma: float, scale: float, tol: float = DEFAULT_TOL) -> float:
    """Predicted point mass of the local limit theorems.

    walk: 2 sigma^2 / (log n)^2 * phi(sigma^2 z / (log n)^2) with scale = n >= 3.
    bottom: sigma^2 / h^2 * phi(sigma^2 x / h^2) with scale = h > 0.
    """
    mode = LltMode(mode)
    variance = sigma * sigma
    if mode == LltMode.WALK:
        if scale < 3:
            raise RangeError("Walk prediction needs n >= 3, got " + str(scale))
        spread = math.log(scale) ** 2
        return 2.0 * variance / spread * phi_inf(variance * argument / spread, tol).value
    if scale <= 0:
        raise RangeError("Bottom prediction needs h > 0, got " + str(scale))
    spread = float(scale) ** 2
    return variance / spread * phi_inf(variance * argument / spread, tol).value


def density_table(x_from: float, x_to: float, step: float, tol: float = DEFAULT_TOL) -> list[dict]:
    """Rows (x, phi, error_bound) on the grid x_from, x_from + step, ..., x_to."""
    if step <= 0 or x_to < x_from:
        raise RangeError("Need step > 0 and x_from <= x_to")
    count = int(math.floor((x_to - x_from) / step + 1e-9)) + 1
    rows = []
    for i in range(count):
        x = round(x_from + i * step, 12)
        evaluation = phi_inf(x, tol)
        rows.append({"x": x, "phi": evaluation.value, "error_bound": evaluation.error_bound})
    return rows
