"""
Sturm chains for univariate polynomials, evaluated homogeneously.

A chain member P_k of degree m_k is evaluated at a point (alpha, beta) of the
closed upper half circle as beta^m_k * P_k(alpha / beta). For beta > 0 this has
the sign of P_k(t) at t = alpha / beta, and at (+-1, 0) it has the sign of P_k
at +-infinity, so sign variations can be counted on the whole real line
without overflow.

Coefficient arrays are ascending: c[i] multiplies t^i (alpha^i beta^(m-i)).
"""

import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from pevcond.core.matpoly import PevcondError


logger = logging.getLogger(__name__)

PRUNE_TOL = 1e-14


class InconclusiveChain(PevcondError):
    """
    A remainder collapsed below the pruning threshold before the chain reached a constant.
    """
    pass


def horner_homogeneous(coeffs: Sequence[float], alpha: float, beta: float) -> float:
    """
    Evaluate sum_i c_i alpha^i beta^(m-i) with m = len(coeffs) - 1.

    Horner runs in whichever ratio alpha/beta or beta/alpha has modulus at most
    one, then the result is multiplied by the matching power.
    """
    m = len(coeffs) - 1
    if m < 0:
        return 0.0
    if abs(alpha) <= abs(beta):
        r = alpha / beta
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * r + c
        return acc * beta ** m
    r = beta / alpha
    acc = 0.0
    for c in coeffs:
        acc = acc * r + c
    return acc * alpha ** m


def _normalized(coeffs: np.ndarray) -> np.ndarray:
    peak = float(np.max(np.abs(coeffs)))
    return coeffs / peak if peak > 0.0 else coeffs


def build_chain(coeffs: Sequence[float], prune_tol: float = PRUNE_TOL) -> List[List[float]]:
    """
    Sturm chain p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k).

    Every member is rescaled to unit max-norm (a positive factor, so signs are
    unchanged) and remainder coefficients below ``prune_tol`` are zeroed.

    Args:
        coeffs: Ascending coefficients of p, leading coefficient nonzero
        prune_tol: Relative pruning threshold

    Returns:
        List[List[float]]: Chain members as ascending coefficient lists

    Raises:
        InconclusiveChain: If a remainder vanishes while the last member has degree >= 1
    """
    p0 = _normalized(P.polytrim(np.asarray(coeffs, dtype=float)))
    chain = [p0]
    if len(p0) <= 1:
        return [p0.tolist()]
    chain.append(_normalized(P.polyder(p0)))
    while len(chain[-1]) > 1:
        _, rem = P.polydiv(chain[-2], chain[-1])
        rem = -np.asarray(rem, dtype=float)
        rem[np.abs(rem) <= prune_tol] = 0.0
        rem = P.polytrim(rem)
        if len(rem) == 1 and rem[0] == 0.0:
            raise InconclusiveChain(
                f"Remainder collapsed at chain length {len(chain)} "
                f"(last degree {len(chain[-1]) - 1})"
            )
        chain.append(_normalized(rem))
    return [member.tolist() for member in chain]


def sign_variations(chain: Sequence[Sequence[float]], alpha: float, beta: float) -> int:
    """
    Number of sign changes of the chain at (alpha, beta), zeros skipped.
    """
    changes = 0
    previous = 0.0
    for member in chain:
        value = horner_homogeneous(member, alpha, beta)
        if value == 0.0:
            continue
        if previous != 0.0 and (value > 0.0) != (previous > 0.0):
            changes += 1
        previous = value
    return changes


def point_of_t(t: float) -> Tuple[float, float]:
    """
    Upper half circle representative of t = alpha / beta; t may be +-inf.
    """
    if math.isinf(t):
        return (1.0, 0.0) if t > 0 else (-1.0, 0.0)
    norm = math.hypot(t, 1.0)
    return t / norm, 1.0 / norm


def count_between(chain: Sequence[Sequence[float]], t_lo: float, t_hi: float) -> int:
    """
    Distinct real roots in (t_lo, t_hi] by the Sturm variation difference.
    """
    if t_hi < t_lo:
        raise ValueError(f"Empty interval ({t_lo}, {t_hi}]")
    return sign_variations(chain, *point_of_t(t_lo)) - sign_variations(chain, *point_of_t(t_hi))


def cauchy_bound(coeffs: Sequence[float]) -> float:
    """
    1 + max_{i<m} |c_i / c_m|; every root of p has modulus below it.
    """
    lead = abs(coeffs[-1])
    if len(coeffs) <= 1:
        return 1.0
    return 1.0 + max(abs(c) for c in coeffs[:-1]) / lead
