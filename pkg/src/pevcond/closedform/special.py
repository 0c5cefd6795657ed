"""
Log-gamma and gamma ratios.

Every expectation formula is a product of ratios Gamma(a)/Gamma(b) whose
arguments grow like (d+1)n^2/2, so Gamma itself overflows long before the
ratio does. Ratios are therefore formed as exp(log_gamma(a) - log_gamma(b)).
"""

import math
from typing import Iterable

from pevcond.core.matpoly import PevcondError


MAX_ARGUMENT = 1e7

# Lanczos approximation with g = 7 and nine terms; relative accuracy of
# Gamma is about 1e-15 for real arguments >= 0.5.
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


class DomainError(PevcondError, ValueError):
    """
    Raised when a closed form is evaluated outside its parameter domain.
    """
    pass


def log_gamma(x: float) -> float:
    """
    ln Gamma(x) for 0 < x <= 1e7.

    Arguments below 0.5 go through the reflection formula
    Gamma(x) Gamma(1 - x) = pi / sin(pi x).

    Args:
        x: Positive real argument

    Returns:
        float: ln Gamma(x)

    Raises:
        DomainError: If x <= 0, x > 1e7 or x is not finite
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0 or x > MAX_ARGUMENT:
        raise DomainError(f"log_gamma is defined here for 0 < x <= {MAX_ARGUMENT:g}, got {x}")
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    series = LANCZOS_COEFFS[0]
    for i, coeff in enumerate(LANCZOS_COEFFS[1:], start=1):
        series += coeff / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(series)


def gamma_ratio(a: float, b: float) -> float:
    """
    Gamma(a) / Gamma(b) for positive a and b.

    Raises:
        DomainError: If either argument is outside the log_gamma domain
    """
    if a == b:
        if a <= 0.0:
            raise DomainError(f"gamma_ratio needs positive arguments, got ({a}, {b})")
        return 1.0
    return math.exp(log_gamma(a) - log_gamma(b))


def compensated_sum(terms: Iterable[float]) -> float:
    """
    Sum with error compensation; used for alternating series.
    """
    return math.fsum(terms)
