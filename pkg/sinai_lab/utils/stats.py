"""Standard errors and comparison helpers for Monte Carlo estimates."""
import math

import numpy as np


def mean_stderr(samples) -> tuple[float, float]:
    """Sample mean and its standard error (sample std over sqrt N)."""
    values = np.asarray(samples, dtype=float)
    count = values.size
    if count == 0:
        return math.nan, math.nan
    mean = float(values.mean())
    if count < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(count))


def binomial_stderr(frequency: float, count: int) -> float:
    """Standard error of an empirical frequency."""
    if count <= 0:
        return math.nan
    return math.sqrt(max(frequency * (1.0 - frequency), 0.0) / count)


def ratio_stderr(numerator, denominator) -> tuple[float, float]:
    """Delta-method estimate of mean(numerator) / mean(denominator).

    Both arrays hold one value per replicate and are paired.

    Returns:
        tuple[float, float]: The ratio and its standard error.
    """
    a = np.asarray(numerator, dtype=float)
    s = np.asarray(denominator, dtype=float)
    count = a.size
    mean_a, mean_s = float(a.mean()), float(s.mean())
    ratio = mean_a / mean_s
    if count < 2:
        return ratio, 0.0
    covariance = np.cov(a, s, ddof=1)
    variance = (
        covariance[0, 0] / mean_s**2
        - 2.0 * mean_a * covariance[0, 1] / mean_s**3
        + mean_a**2 * covariance[1, 1] / mean_s**4
    )
    return ratio, math.sqrt(max(float(variance), 0.0) / count)


def product_stderr(x: float, se_x: float, y: float, se_y: float) -> float:
    """First-order standard error of x * y for independent estimates."""
    return math.sqrt((se_x * y) ** 2 + (se_y * x) ** 2)


def combined_stderr(*errors: float) -> float:
    """Combined standard error sqrt(sum se^2) of a difference of independent estimates."""
    return math.sqrt(sum(error * error for error in errors))


def within(a: float, b: float, stderr: float, width: float = 3.0) -> bool:
    """Whether |a - b| is at most ``width`` standard errors."""
    return abs(a - b) <= width * stderr


def tv_distance(p, q) -> float:
    """Total variation distance between two probability vectors on the same support."""
    return 0.5 * float(np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)).sum())
