"""
Relative condition numbers of real polynomial eigenvalues.

For a simple eigenvalue (alpha, beta) of A with right and left eigenvectors r
and l, and v = beta * dP/dalpha r - alpha * dP/dbeta r, the relative condition
number is

    mu(A, (alpha, beta)) = sqrt(sum_k alpha^2k beta^(2d-2k)) * ||r|| ||l|| / |l^T v| * ||A||.

The total condition number of A is the sum over all real eigenvalues, and is
infinite when every point of the projective line is an eigenvalue.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from pevcond.conditioning.jacobi_svd import jacobi_svd
from pevcond.core.matpoly import (
    MatrixPolynomial,
    PevcondError,
    ProjectivePoint,
    evaluate,
    evaluate_partials,
    elementary_direction,
    frobenius_norm,
    monomial_weights,
    perturbed,
)
from pevcond.solver.pevsolver import ClusterWarning, Degenerate, polynomial_eigenvalues


logger = logging.getLogger(__name__)

EIG_RESIDUAL_TOL = 1e-8
CRITICAL_TOL = 1e-14
FD_RELATIVE_STEP = 1e-6
TRACKING_LIMIT = 0.1


class NotAnEigenvalue(PevcondError):
    """
    Raised when P(A, alpha, beta) is too far from singular at the given point.
    """
    pass


class RootTrackingLost(PevcondError):
    """
    Raised when a perturbed problem has no root near the tracked eigenvalue.
    """
    pass


@dataclass
class PevRecord:
    point: ProjectivePoint
    right: np.ndarray
    left: np.ndarray
    sigma_min: float
    local_mu: float
    residual: float

    def to_dict(self):
        return {
            "alpha": self.point.alpha,
            "beta": self.point.beta,
            "local_mu": self.local_mu,
            "sigma_min": self.sigma_min,
            "residual": self.residual,
        }


@dataclass
class ConditionReport:
    """
    Local condition numbers of every real eigenvalue and their sum.
    """
    records: List[PevRecord]
    total_mu: float
    degenerate: bool = False
    warnings: List[ClusterWarning] = field(default_factory=list)

    def to_dict(self):
        return {
            "eigenvalues": [record.to_dict() for record in self.records],
            "total_mu": self.total_mu,
            "degenerate": self.degenerate,
        }


def _first_nonzero_positive(vector: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(vector)
    if len(nonzero) and vector[nonzero[0]] < 0.0:
        return -vector
    return vector


def eigenvectors_at(
    mp: MatrixPolynomial,
    pt: ProjectivePoint
) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Unit right and left singular vectors for the smallest singular value of P(A, pt).

    r comes from the Jacobi SVD of M and has its first nonzero component
    positive; l comes from the SVD of M^T and is oriented so that
    l^T M r = sigma_min >= 0.

    Args:
        mp: Matrix polynomial
        pt: Numerical eigenvalue of mp

    Returns:
        Tuple of (r, l, sigma_min)

    Raises:
        NotAnEigenvalue: If sigma_min > EIG_RESIDUAL_TOL * ||A|| ||w(pt)||, the
            upper bound of ||M|| that stays away from zero when n = 1
        JacobiNotConverged: If the SVD does not converge
    """
    m = evaluate(mp, pt)
    right = jacobi_svd(m)
    left = jacobi_svd(m.T)
    sigma_min = float(right.s[-1])
    norm_m = frobenius_norm(mp) * float(np.linalg.norm(monomial_weights(mp.d, pt)))
    if sigma_min > EIG_RESIDUAL_TOL * norm_m:
        raise NotAnEigenvalue(
            f"{pt} is not an eigenvalue: sigma_min={sigma_min:.3e}, scale={norm_m:.3e}"
        )
    r = _first_nonzero_positive(right.v[:, -1])
    ell = left.v[:, -1]
    pairing = float(ell @ m @ r)
    if abs(pairing) > np.finfo(float).eps * max(norm_m, 1.0):
        if pairing < 0.0:
            ell = -ell
    else:
        ell = _first_nonzero_positive(ell)
    return r, ell, sigma_min


def local_condition(mp: MatrixPolynomial, pt: ProjectivePoint) -> PevRecord:
    """
    Relative condition number of the eigenvalue pt of mp.

    The point is used as given, so pt and its antipode may both be passed.
    The record's ``residual`` is sigma_min / ||A||.

    Args:
        mp: Matrix polynomial
        pt: Eigenvalue of mp

    Returns:
        PevRecord: Eigenvectors, sigma_min and local_mu (+inf at critical points)

    Raises:
        NotAnEigenvalue: If pt is not an eigenvalue
    """
    r, ell, sigma_min = eigenvectors_at(mp, pt)
    d_alpha, d_beta = evaluate_partials(mp, pt)
    v = pt.beta * (d_alpha @ r) - pt.alpha * (d_beta @ r)
    norm_a = frobenius_norm(mp)
    pairing = abs(float(ell @ v))
    if pairing <= CRITICAL_TOL * norm_a:
        logger.debug(f"|l^T v| = {pairing:.3e} at {pt}; local condition is infinite")
        mu = math.inf
    else:
        weights = float(np.linalg.norm(monomial_weights(mp.d, pt)))
        mu = weights * float(np.linalg.norm(r) * np.linalg.norm(ell)) / pairing * norm_a
    return PevRecord(
        point=pt,
        right=r,
        left=ell,
        sigma_min=sigma_min,
        local_mu=mu,
        residual=sigma_min / norm_a if norm_a > 0.0 else 0.0,
    )


def total_condition(mp: MatrixPolynomial) -> ConditionReport:
    """
    Sum of local condition numbers over all real eigenvalues of mp.

    Returns:
        ConditionReport: total_mu is +inf with degenerate=True when the
        determinant form vanishes identically
    """
    result = polynomial_eigenvalues(mp)
    if isinstance(result, Degenerate):
        return ConditionReport(records=[], total_mu=math.inf, degenerate=True)
    records = [local_condition(mp, pt) for pt in result.roots]
    total = math.fsum(record.local_mu for record in records) if records else 0.0
    if any(math.isinf(record.local_mu) for record in records):
        total = math.inf
    return ConditionReport(records=records, total_mu=total, warnings=list(result.warnings))


def _wrapped(delta: float) -> float:
    """
    Representative of delta mod pi in (-pi/2, pi/2].
    """
    wrapped = math.remainder(delta, math.pi)
    return math.pi / 2 if wrapped == -math.pi / 2 else wrapped


def _tracked_shift(mp: MatrixPolynomial, theta: float) -> float:
    result = polynomial_eigenvalues(mp)
    if isinstance(result, Degenerate) or not result.roots:
        raise RootTrackingLost("Perturbed problem has no real eigenvalue")
    shift = min((_wrapped(pt.angle - theta) for pt in result.roots), key=abs)
    if abs(shift) > TRACKING_LIMIT:
        raise RootTrackingLost(f"Nearest perturbed root moved {shift:.3e} rad")
    return shift


def finite_difference_condition(
    mp: MatrixPolynomial,
    pt: ProjectivePoint,
    h: Optional[float] = None,
) -> float:
    """
    Relative condition number estimated by central differences of the root angle.

    Each of the (d+1)n^2 elementary directions E is applied as mp +- h E, the
    root nearest to pt is re-solved, and the angle shifts assemble a gradient
    whose norm times ||A|| is the estimate.

    Args:
        mp: Matrix polynomial
        pt: Simple, well separated eigenvalue of mp
        h: Step; defaults to FD_RELATIVE_STEP * ||A||

    Returns:
        float: Estimate of local_condition(mp, pt).local_mu

    Raises:
        RootTrackingLost: If a perturbed root cannot be paired with pt
    """
    norm_a = frobenius_norm(mp)
    step = FD_RELATIVE_STEP * norm_a if h is None else float(h)
    if step <= 0.0:
        raise ValueError(f"Step must be positive, got {step}")
    theta = pt.angle
    gradient = np.empty(mp.coeffs.size)
    for index in range(mp.coeffs.size):
        direction = elementary_direction(mp, index)
        forward = _tracked_shift(perturbed(mp, direction, step), theta)
        backward = _tracked_shift(perturbed(mp, direction, -step), theta)
        gradient[index] = (forward - backward) / (2.0 * step)
    return norm_a * float(np.linalg.norm(gradient))
