"""
Real polynomial eigenvalues of a matrix polynomial.

The determinant q(alpha, beta) = det P(A, alpha, beta) is a binary form of
degree nd. Its coefficients are fitted by least squares to determinants sampled
at equally spaced angles of the half circle, with the two end coefficients
replaced by the exactly computable det(A_0) and det(A_d). Real projective roots
are isolated by a Sturm chain on the affine chart t = alpha / beta, bisected in
the angle theta with (alpha, beta) = (cos theta, sin theta) and polished by
Newton's method on theta -> q(cos theta, sin theta). An angle scan of q
cross-checks the chain. polynomial_eigenvalues then settles every root against
theta -> det P(A, cos theta, sin theta) itself. The point [1:0] is handled
separately.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from pevcond.core.matpoly import (
    MatrixPolynomial,
    PevcondError,
    ProjectivePoint,
    evaluate,
    evaluate_partials,
    frobenius_norm,
    monomial_weights,
)
from pevcond.solver.sturm import (
    InconclusiveChain,
    build_chain,
    cauchy_bound,
    count_between,
    horner_homogeneous,
    sign_variations,
)


logger = logging.getLogger(__name__)

MAX_DEGREE = 64
SAMPLES_PER_COEFF = 2
DEGENERACY_TOL = 1e-12
INFINITY_TOL = 1e-10
BISECTION_WIDTH = 1e-10
CLUSTER_ANGLE = 1e-7
NEWTON_STEPS = 8
FALLBACK_ACCEPT = 1e-12
FALLBACK_CANDIDATE = 1e-2
SAMPLES_PER_DEGREE = 64
EXTREMUM_STEPS = 160
SETTLE_WINDOW = 1e-6
SINGULAR_TOL = 1e-8
SPLIT_TOL = 1e-13
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class DegreeOverflow(PevcondError):
    """
    Raised when n*d exceeds the interpolation limit.
    """
    pass


class DegenerateForm(PevcondError):
    """
    Raised when the determinant form vanishes identically (to tolerance).
    """
    pass


class ClusterWarning(UserWarning):
    """
    Two returned roots lie within CLUSTER_ANGLE of each other, or a root was
    found as a multiple root. Attached to RootSet.warnings, never raised.
    """
    pass


@dataclass(frozen=True)
class BinaryForm:
    """
    q(alpha, beta) = sum_i coeffs[i] alpha^i beta^(deg-i).

    ``scale`` is max |c_i|. ``input_scale`` is the size of a determinant of the
    matrix polynomial the form came from: the largest, over the sampled angles,
    of |det P| with its smallest singular value lifted to the largest one.
    Forms built directly from coefficients use ``scale``.
    """
    deg: int
    coeffs: Tuple[float, ...]
    scale: float
    input_scale: float

    @classmethod
    def from_coeffs(cls, coeffs, input_scale: Optional[float] = None) -> "BinaryForm":
        values = tuple(float(c) for c in coeffs)
        if not values or not all(math.isfinite(c) for c in values):
            raise ValueError("Binary form coefficients must be finite and nonempty")
        scale = max(abs(c) for c in values)
        return cls(
            deg=len(values) - 1,
            coeffs=values,
            scale=scale,
            input_scale=scale if input_scale is None else float(input_scale),
        )

    @property
    def is_degenerate(self) -> bool:
        return self.scale <= DEGENERACY_TOL * self.input_scale

    def evaluate(self, alpha: float, beta: float) -> float:
        return horner_homogeneous(self.coeffs, alpha, beta)

    def value_at(self, theta: float) -> float:
        return horner_homogeneous(self.coeffs, math.cos(theta), math.sin(theta))

    def values_on(self, thetas: np.ndarray) -> np.ndarray:
        return _angle_weights(self.deg, thetas) @ np.asarray(self.coeffs)

    def evaluate_angle(self, theta: float) -> Tuple[float, float]:
        """
        g(theta) = q(cos theta, sin theta) and g'(theta) = -beta q_alpha + alpha q_beta.
        """
        alpha, beta = math.cos(theta), math.sin(theta)
        m = self.deg
        value = horner_homogeneous(self.coeffs, alpha, beta)
        if m == 0:
            return value, 0.0
        c = self.coeffs
        q_alpha = horner_homogeneous([(j + 1) * c[j + 1] for j in range(m)], alpha, beta)
        q_beta = horner_homogeneous([(m - j) * c[j] for j in range(m)], alpha, beta)
        return value, -beta * q_alpha + alpha * q_beta

    def affine_part(self) -> Tuple[Tuple[float, ...], int]:
        """
        Coefficients of p(t) = q(t, 1) with negligible leading terms removed.

        Returns:
            Tuple of (effective ascending coefficients, multiplicity of the root at infinity)
        """
        coeffs = list(self.coeffs)
        infinite = 0
        while len(coeffs) > 1 and abs(coeffs[-1]) <= INFINITY_TOL * self.scale:
            coeffs.pop()
            infinite += 1
        return tuple(coeffs), infinite


class DeterminantCurve:
    """
    theta -> det P(A, cos theta, sin theta), each value by partially pivoted LU.

    The representative (cos theta, sin theta) is not canonicalized, so the
    curve is continuous through theta = 0 and theta = pi.
    """

    def __init__(self, mp: MatrixPolynomial):
        self.mp = mp
        self.norm = frobenius_norm(mp)

    def matrix(self, theta: float) -> np.ndarray:
        return evaluate(self.mp, ProjectivePoint.from_angle(theta))

    def value_at(self, theta: float) -> float:
        return float(np.linalg.det(self.matrix(theta)))

    def evaluate_angle(self, theta: float) -> Tuple[float, float]:
        """
        g(theta) and g'(theta) = g(theta) tr(M^-1 M') by Jacobi's formula.
        """
        pt = ProjectivePoint.from_angle(theta)
        m = evaluate(self.mp, pt)
        value = float(np.linalg.det(m))
        if value == 0.0:
            return value, 0.0
        d_alpha, d_beta = evaluate_partials(self.mp, pt)
        try:
            ratio = np.linalg.solve(m, -pt.beta * d_alpha + pt.alpha * d_beta)
        except np.linalg.LinAlgError:
            return value, 0.0
        return value, value * float(np.trace(ratio))

    def determinant_scale(self, theta: float) -> float:
        """
        sigma_max times the product of all singular values but the smallest.
        """
        s = np.linalg.svd(self.matrix(theta), compute_uv=False)
        return float(s[0] * np.prod(s[:-1]))

    def is_eigenvalue(self, theta: float) -> bool:
        """
        sigma_min <= SINGULAR_TOL * ||A|| * ||w||, the test local_condition applies.
        """
        pt = ProjectivePoint.from_angle(theta)
        s = np.linalg.svd(evaluate(self.mp, pt), compute_uv=False)
        weights = float(np.linalg.norm(monomial_weights(self.mp.d, pt)))
        return float(s[-1]) <= SINGULAR_TOL * self.norm * weights


@dataclass
class RootSet:
    """
    Real projective roots of a binary form.
    """
    roots: List[ProjectivePoint]
    certified_count: Optional[int]
    residuals: List[float]
    warnings: List[ClusterWarning] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def angles(self) -> List[float]:
        return [pt.angle for pt in self.roots]


@dataclass(frozen=True)
class Degenerate:
    """
    Outcome of polynomial_eigenvalues when every point of RP^1 is an eigenvalue.
    """
    form: BinaryForm


def _angle_weights(deg: int, thetas: np.ndarray) -> np.ndarray:
    """
    Rows (cos^i theta sin^(deg-i) theta)_{i=0..deg}, one per angle.
    """
    i = np.arange(deg + 1)
    thetas = np.asarray(thetas, dtype=float)
    return np.cos(thetas)[:, None] ** i * np.sin(thetas)[:, None] ** (deg - i)


def det_binary_form(mp: MatrixPolynomial) -> BinaryForm:
    """
    Coefficients of q(alpha, beta) = det P(A, alpha, beta).

    det P(A, cos theta, sin theta) is sampled at 2(nd+1) equally spaced angles
    of [0, pi), each determinant by partially pivoted LU. The coefficients are
    the least squares fit in the binomially weighted monomial basis, and the
    constant and leading coefficients are then overwritten by det(A_0) and
    det(A_d). A form whose samples all lie below DEGENERACY_TOL * input_scale
    is returned as the zero form.

    Args:
        mp: Matrix polynomial

    Returns:
        BinaryForm: Degree nd determinant form

    Raises:
        DegreeOverflow: If n*d > 64
    """
    n, d = mp.n, mp.d
    nd = n * d
    if nd > MAX_DEGREE:
        raise DegreeOverflow(f"n*d = {nd} exceeds the interpolation limit of {MAX_DEGREE}")
    count = SAMPLES_PER_COEFF * (nd + 1)
    thetas = math.pi * np.arange(count) / count
    pencils = np.tensordot(_angle_weights(d, thetas), mp.coeffs, axes=1)
    samples = np.linalg.det(pencils)
    singular = np.linalg.svd(pencils, compute_uv=False)
    input_scale = float(np.max(singular[:, 0] * np.prod(singular[:, :-1], axis=1)))
    if float(np.max(np.abs(samples))) <= DEGENERACY_TOL * input_scale:
        return BinaryForm.from_coeffs(np.zeros(nd + 1), input_scale=input_scale)

    weights = np.sqrt([float(math.comb(nd, i)) for i in range(nd + 1)])
    fitted, *_ = np.linalg.lstsq(_angle_weights(nd, thetas) * weights, samples, rcond=None)
    coeffs = fitted * weights
    coeffs[0] = np.linalg.det(mp.coeffs[0])
    coeffs[nd] = np.linalg.det(mp.coeffs[d])
    return BinaryForm.from_coeffs(coeffs, input_scale=input_scale)


def sturm_root_count(q: BinaryForm, t_lo: float, t_hi: float) -> int:
    """
    Number of distinct real roots of p(t) = q(t, 1) in (t_lo, t_hi].

    The chain is built for the affine part of q, so roots that have moved to
    infinity within INFINITY_TOL are not counted here.

    Raises:
        DegenerateForm: If q vanishes identically
        InconclusiveChain: If the chain collapses
    """
    if q.is_degenerate:
        raise DegenerateForm("Cannot count roots of a degenerate form")
    affine, _ = q.affine_part()
    return count_between(build_chain(affine), t_lo, t_hi)


def _angle_point(theta: float) -> Tuple[float, float]:
    return math.cos(theta), math.sin(theta)


def _polish(curve, theta: float, lo: float, hi: float, steps: int) -> float:
    """
    Newton on g(theta), each step accepted only if it stays in [lo, hi] and does not increase |g|.

    ``curve`` is a BinaryForm or a DeterminantCurve.
    """
    value, slope = curve.evaluate_angle(theta)
    for _ in range(steps):
        if value == 0.0 or slope == 0.0:
            break
        candidate = theta - value / slope
        if not lo <= candidate <= hi:
            break
        new_value, new_slope = curve.evaluate_angle(candidate)
        if abs(new_value) > abs(value):
            break
        converged = abs(candidate - theta) <= 4.0 * np.finfo(float).eps * max(1.0, abs(theta))
        theta, value, slope = candidate, new_value, new_slope
        if converged:
            break
    return theta


def _refine(curve, a: float, b: float) -> float:
    """
    Locate the single root with angle in [a, b): bisection to BISECTION_WIDTH, then Newton.
    """
    g_a = curve.value_at(a)
    if g_a == 0.0:
        return a
    g_b = curve.value_at(b)
    lo, hi = a, b
    if (g_a > 0.0) != (g_b > 0.0):
        while hi - lo > BISECTION_WIDTH:
            mid = 0.5 * (lo + hi)
            g_mid = curve.value_at(mid)
            if g_mid == 0.0:
                return mid
            if (g_mid > 0.0) == (g_a > 0.0):
                lo, g_a = mid, g_mid
            else:
                hi = mid
        start = 0.5 * (lo + hi)
    else:
        # even multiplicity: start from the smallest sample of |g|
        grid = np.linspace(a, b, 33)
        start = float(grid[int(np.argmin([abs(curve.value_at(x)) for x in grid]))])
    return _polish(curve, start, a - BISECTION_WIDTH, b + BISECTION_WIDTH, NEWTON_STEPS)


def _extremum(curve, lo: float, hi: float, sign: float, floor: float) -> Tuple[float, float]:
    """
    Golden-section search for the minimum of sign * g on [lo, hi].

    Stops as soon as a sample of sign * g falls below ``floor``.

    Returns:
        Tuple of (theta, sign * g(theta))
    """
    a, b = lo, hi
    x1, x2 = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    f1, f2 = sign * curve.value_at(x1), sign * curve.value_at(x2)
    for _ in range(EXTREMUM_STEPS):
        if min(f1, f2) < floor or b - a <= 4.0 * np.finfo(float).eps * max(1.0, abs(a)):
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = sign * curve.value_at(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = sign * curve.value_at(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _isolate(
    form: BinaryForm,
    chain,
    theta_lo: float,
    theta_hi: float
) -> Tuple[List[float], int, List[ClusterWarning]]:
    """
    Split [theta_lo, theta_hi) until every piece holds at most one distinct root.
    """
    def variations(theta: float) -> int:
        return sign_variations(chain, *_angle_point(theta))

    found: List[float] = []
    notes: List[ClusterWarning] = []
    v_lo, v_hi = variations(theta_lo), variations(theta_hi)
    total = v_hi - v_lo
    stack = [(theta_lo, theta_hi, v_lo, v_hi)]
    while stack:
        a, b, v_a, v_b = stack.pop()
        count = v_b - v_a
        if count <= 0:
            continue
        if count == 1:
            found.append(_refine(form, a, b))
            continue
        if b - a <= BISECTION_WIDTH:
            notes.append(ClusterWarning(
                f"{count} distinct roots within {b - a:.1e} rad near theta={a:.12g}"
            ))
            found.append(_refine(form, a, b))
            continue
        mid = 0.5 * (a + b)
        v_mid = variations(mid)
        stack.append((mid, b, v_mid, v_b))
        stack.append((a, mid, v_a, v_mid))
    return found, total, notes


def _scan_grid(deg: int) -> np.ndarray:
    samples = SAMPLES_PER_DEGREE * max(deg, 1) + 1
    return np.linspace(0.0, math.pi, samples)[1:-1]


def _check_isolation(form: BinaryForm, thetas: Sequence[float], total: int) -> None:
    """
    Raise InconclusiveChain when the chain's count or roots contradict q on the angle scan.
    """
    values = form.values_on(_scan_grid(form.deg))
    signs = np.sign(values[values != 0.0])
    crossings = int(np.count_nonzero(signs[1:] != signs[:-1]))
    if crossings > total:
        raise InconclusiveChain(f"Chain counts {total} roots but q changes sign {crossings} times")
    for theta in thetas:
        if abs(form.value_at(theta)) > FALLBACK_ACCEPT * form.scale:
            raise InconclusiveChain(f"Isolated root theta={theta:.12g} does not solve q")


def _subdivide(form: BinaryForm) -> Tuple[List[float], List[ClusterWarning]]:
    """
    Grid search over theta in (0, pi) used when the Sturm chain is inconclusive.

    Sign changes are bisected. At a small local minimum of |q| the extremum
    between the neighbouring samples is located: a sign change there gives two
    close roots, a vanishing value a multiple root.
    """
    grid = _scan_grid(form.deg)
    values = np.array([form.value_at(float(x)) for x in grid])
    accept = FALLBACK_ACCEPT * form.scale
    found: List[float] = []
    notes: List[ClusterWarning] = []
    for k in range(len(grid)):
        if values[k] == 0.0:
            found.append(float(grid[k]))
            if 0 < k < len(grid) - 1 and values[k - 1] * values[k + 1] > 0.0:
                notes.append(ClusterWarning(f"Multiple root suspected at theta={grid[k]:.12g}"))
        elif k + 1 < len(grid) and values[k + 1] != 0.0 and (values[k] > 0) != (values[k + 1] > 0):
            found.append(_refine(form, float(grid[k]), float(grid[k + 1])))
    for k in range(1, len(grid) - 1):
        magnitude = abs(values[k])
        if magnitude == 0.0 or magnitude > FALLBACK_CANDIDATE * form.scale:
            continue
        if magnitude > abs(values[k - 1]) or magnitude > abs(values[k + 1]):
            continue
        if (values[k - 1] > 0) != (values[k] > 0) or (values[k + 1] > 0) != (values[k] > 0):
            continue
        lo, hi = float(grid[k - 1]), float(grid[k + 1])
        sign = 1.0 if values[k] > 0.0 else -1.0
        peak, lowest = _extremum(form, lo, hi, sign, -accept)
        if lowest < -accept:
            found.extend([_refine(form, lo, peak), _refine(form, peak, hi)])
            notes.append(ClusterWarning(f"Two close roots found near theta={peak:.12g}"))
        elif lowest <= accept:
            found.append(peak)
            notes.append(ClusterWarning(f"Multiple root suspected near theta={peak:.12g}"))
    return found, notes


def _form_roots(q: BinaryForm) -> Tuple[List[float], int, Optional[int], List[ClusterWarning]]:
    """
    Angles of the finite roots of q, the multiplicity at infinity, the Sturm count and notes.
    """
    affine, infinite = q.affine_part()
    affine_form = BinaryForm.from_coeffs(affine, input_scale=q.input_scale)
    notes: List[ClusterWarning] = []
    certified: Optional[int] = 0
    thetas: List[float] = []
    if len(affine) > 1:
        bound = cauchy_bound(affine)
        theta_lo, theta_hi = math.atan2(1.0, bound), math.atan2(1.0, -bound)
        try:
            chain = build_chain(affine)
            thetas, certified, notes = _isolate(affine_form, chain, theta_lo, theta_hi)
            _check_isolation(affine_form, thetas, certified)
        except InconclusiveChain as e:
            logger.warning(f"Sturm chain inconclusive ({e}); falling back to grid subdivision")
            thetas, notes = _subdivide(affine_form)
            certified = None
    return thetas, infinite, certified, notes


def _assemble(
    q: BinaryForm,
    thetas: Sequence[float],
    infinite: int,
    certified: Optional[int],
    notes: List[ClusterWarning]
) -> RootSet:
    points = [ProjectivePoint.from_homogeneous(*_angle_point(theta)) for theta in thetas]
    if infinite:
        points.append(ProjectivePoint(1.0, 0.0))
        if certified is not None:
            certified += 1
        if infinite > 1:
            notes.append(ClusterWarning(f"Root at infinity has multiplicity {infinite}"))

    points = _merge_equal(points, q)
    notes.extend(_cluster_notes(points))
    for note in notes:
        logger.warning(str(note))
    residuals = [abs(q.evaluate(pt.alpha, pt.beta)) / q.scale for pt in points]
    return RootSet(roots=points, certified_count=certified, residuals=residuals, warnings=notes)


def real_projective_roots(q: BinaryForm) -> RootSet:
    """
    All real roots of q on RP^1 as canonical points.

    Args:
        q: Non-degenerate binary form

    Returns:
        RootSet: Roots sorted by angle, residuals |q(root)|/scale, cluster warnings

    Raises:
        DegenerateForm: If q.is_degenerate
    """
    if q.is_degenerate:
        raise DegenerateForm(
            f"Determinant form vanishes: max|c|={q.scale:.3e}, input scale={q.input_scale:.3e}"
        )
    return _assemble(q, *_form_roots(q))


def _merge_equal(points: List[ProjectivePoint], q: BinaryForm) -> List[ProjectivePoint]:
    points = sorted(points, key=lambda pt: pt.angle)
    merged: List[ProjectivePoint] = []
    for pt in points:
        if merged and merged[-1] == pt:
            keep = merged[-1]
            if abs(q.evaluate(pt.alpha, pt.beta)) < abs(q.evaluate(keep.alpha, keep.beta)):
                merged[-1] = pt
            continue
        merged.append(pt)
    if len(merged) > 1 and merged[0] == merged[-1]:
        merged.pop()
    return merged


def _cluster_notes(points: List[ProjectivePoint]) -> List[ClusterWarning]:
    notes = []
    count = len(points)
    if count < 2:
        return notes
    pairs = [(k, k + 1) for k in range(count - 1)]
    if count > 2:
        pairs.append((count - 1, 0))
    for i, j in pairs:
        gap = points[i].angular_distance(points[j])
        if gap < CLUSTER_ANGLE:
            message = f"Roots {points[i]} and {points[j]} are {gap:.1e} rad apart"
            notes.append(ClusterWarning(message))
    return notes


def _settle_group(curve: DeterminantCurve, group: List[float]) -> List[float]:
    """
    Roots of the determinant in a window around a group of nearby form roots.

    Opposite signs at the window ends: one root, polished by Newton. Equal
    signs: the extremum in between decides between two roots, one multiple
    root, or none.
    """
    lo, hi = group[0] - SETTLE_WINDOW, group[-1] + SETTLE_WINDOW
    g_lo, g_hi = curve.value_at(lo), curve.value_at(hi)
    if g_lo == 0.0 or g_hi == 0.0 or (g_lo > 0.0) != (g_hi > 0.0):
        if len(group) == 1:
            return [_polish(curve, group[0], lo, hi, NEWTON_STEPS)]
        return [_refine(curve, lo, hi)]
    sign = 1.0 if g_lo > 0.0 else -1.0
    floor = -SPLIT_TOL * curve.determinant_scale(0.5 * (lo + hi))
    peak, lowest = _extremum(curve, lo, hi, sign, floor)
    if lowest < -SPLIT_TOL * curve.determinant_scale(peak):
        return [_refine(curve, lo, peak), _refine(curve, peak, hi)]
    if curve.is_eigenvalue(peak):
        return [peak]
    logger.warning(f"Dropping theta={peak:.12g}: P(A, cos theta, sin theta) is not singular")
    return []


def _settle(curve: DeterminantCurve, thetas: Sequence[float]) -> List[float]:
    """
    Re-solve the form's roots against the determinant, grouping roots within 2 SETTLE_WINDOW.
    """
    settled: List[float] = []
    group: List[float] = []
    for theta in sorted(thetas):
        if group and theta - group[-1] > 2.0 * SETTLE_WINDOW:
            settled.extend(_settle_group(curve, group))
            group = []
        group.append(theta)
    if group:
        settled.extend(_settle_group(curve, group))
    return settled


def polynomial_eigenvalues(mp: MatrixPolynomial) -> Union[RootSet, Degenerate]:
    """
    Real polynomial eigenvalues [alpha:beta] of mp.

    Roots of the determinant form are settled against det P(A, cos theta, sin theta);
    certified_count is dropped when that changes the number of finite roots.

    Args:
        mp: Matrix polynomial

    Returns:
        RootSet, or Degenerate when det P(A, alpha, beta) vanishes identically

    Raises:
        DegreeOverflow: If n*d > 64
    """
    form = det_binary_form(mp)
    if form.is_degenerate:
        logger.debug(f"Degenerate determinant form for n={mp.n}, d={mp.d}")
        return Degenerate(form)
    thetas, infinite, certified, notes = _form_roots(form)
    settled = _settle(DeterminantCurve(mp), thetas)
    if certified is not None and len(settled) != len(thetas):
        logger.info(f"Determinant gives {len(settled)} finite roots, the form {len(thetas)}")
        certified = None
    return _assemble(form, settled, infinite, certified, notes)
