"""
One-sided Jacobi (Hestenes) singular value decomposition for small dense matrices.
"""

import logging
import math
from typing import NamedTuple

import numpy as np

from pevcond.core.matpoly import PevcondError


logger = logging.getLogger(__name__)

OFF_DIAGONAL_TOL = 1e-14
MAX_SWEEPS = 60


class JacobiNotConverged(PevcondError):
    """
    Raised when the column pairs are still not orthogonal after MAX_SWEEPS sweeps.
    """
    pass


class SvdResult(NamedTuple):
    """
    M = u @ diag(s) @ v.T with s sorted descending.

    Columns of ``u`` that belong to zero singular values are zero.
    """
    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


def jacobi_svd(
    matrix: np.ndarray,
    tol: float = OFF_DIAGONAL_TOL,
    max_sweeps: int = MAX_SWEEPS
) -> SvdResult:
    """
    Orthogonalize the columns of ``matrix`` by plane rotations applied from the right.

    A column pair (p, q) is rotated when |<a_p, a_q>| > tol * ||a_p|| ||a_q||.
    Iteration stops after the first sweep in which no pair needed rotating.

    Args:
        matrix: Real m x n matrix
        tol: Relative off-diagonal tolerance
        max_sweeps: Sweep cap

    Returns:
        SvdResult: Thin factors, singular values in descending order

    Raises:
        JacobiNotConverged: If the sweep cap is reached
    """
    work = np.array(matrix, dtype=float, copy=True)
    if work.ndim != 2:
        raise ValueError(f"Expected a 2-D matrix, got shape {work.shape}")
    cols = work.shape[1]
    v = np.eye(cols)

    for sweep in range(max_sweeps):
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                a_p, a_q = work[:, p], work[:, q]
                alpha = float(a_p @ a_p)
                beta = float(a_q @ a_q)
                gamma = float(a_p @ a_q)
                if gamma == 0.0 or abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.hypot(1.0, t)
                s = c * t
                new_p = c * a_p - s * a_q
                work[:, q] = s * a_p + c * a_q
                work[:, p] = new_p
                v_p = v[:, p].copy()
                v[:, p] = c * v_p - s * v[:, q]
                v[:, q] = s * v_p + c * v[:, q]
        if not rotated:
            logger.debug(f"Jacobi SVD of shape {work.shape} converged after {sweep + 1} sweeps")
            break
    else:
        raise JacobiNotConverged(f"No convergence after {max_sweeps} sweeps")

    s = np.linalg.norm(work, axis=0)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    v = v[:, order]
    work = work[:, order]
    u = np.zeros_like(work)
    nonzero = s > 0.0
    u[:, nonzero] = work[:, nonzero] / s[nonzero]
    return SvdResult(u=u, s=s, v=v)
