"""
Homogeneous matrix polynomials.

A matrix polynomial is a tuple A = (A_0, ..., A_d) of real n x n matrices that
defines the matrix-valued binary form

    P(A, alpha, beta) = sum_i alpha^i beta^(d-i) A_i.

This module holds the storage type, points of the real projective line,
evaluation and partial derivatives, the Frobenius norm of the product space
and linear changes of the coefficient basis.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence, Tuple

import numpy as np


logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12
POINT_EQ_TOL = 1e-12
TRANSFORM_DET_TOL = 1e-10


class PevcondError(Exception):
    """
    Base class for all errors raised by pevcond.
    """
    pass


class InvalidMatrixPolynomial(PevcondError, ValueError):
    """
    Raised when coefficient matrices have the wrong shape or non-finite entries.
    """
    pass


class SingularTransform(PevcondError, ValueError):
    """
    Raised when a coefficient basis change is not invertible.
    """
    pass


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """
    A point [alpha:beta] of the real projective line, stored on the unit circle.

    The canonical representative has beta > 0, or beta == 0 and alpha == 1.
    Points compare equal when their canonical representatives agree.
    """
    alpha: float
    beta: float

    def __post_init__(self):
        norm = math.hypot(self.alpha, self.beta)
        if not math.isfinite(norm) or abs(norm - 1.0) > UNIT_TOL:
            raise ValueError(
                f"ProjectivePoint must lie on the unit circle, got ({self.alpha}, {self.beta})"
            )

    @classmethod
    def from_homogeneous(cls, alpha: float, beta: float) -> "ProjectivePoint":
        """
        Build the canonical point for homogeneous coordinates (alpha, beta) != 0.

        Args:
            alpha: First homogeneous coordinate
            beta: Second homogeneous coordinate

        Returns:
            ProjectivePoint: Canonical unit representative

        Raises:
            ValueError: If both coordinates are zero
        """
        norm = math.hypot(alpha, beta)
        if norm == 0.0 or not math.isfinite(norm):
            raise ValueError("Homogeneous coordinates must be finite and not both zero")
        return cls(alpha / norm, beta / norm).canonical()

    @classmethod
    def from_angle(cls, theta: float) -> "ProjectivePoint":
        """
        Point (cos theta, sin theta), not canonicalized.
        """
        return cls(math.cos(theta), math.sin(theta))

    @property
    def angle(self) -> float:
        """
        Angle of the canonical representative, in [0, pi).
        """
        c = self.canonical()
        return math.atan2(c.beta, c.alpha)

    @property
    def is_canonical(self) -> bool:
        return self.beta > 0.0 or (self.beta == 0.0 and self.alpha > 0.0)

    def canonical(self) -> "ProjectivePoint":
        if self.is_canonical:
            return self
        if self.beta == 0.0:
            return ProjectivePoint(1.0, 0.0)
        return ProjectivePoint(-self.alpha, -self.beta)

    def antipode(self) -> "ProjectivePoint":
        """
        The other unit representative (-alpha, -beta) of the same projective point.
        """
        return ProjectivePoint(-self.alpha, -self.beta)

    def angular_distance(self, other: "ProjectivePoint") -> float:
        """
        Distance on RP^1 measured as an angle in [0, pi/2].
        """
        delta = abs(self.angle - other.angle) % math.pi
        return min(delta, math.pi - delta)

    def isclose(self, other: "ProjectivePoint", tol: float = POINT_EQ_TOL) -> bool:
        return self.angular_distance(other) <= tol

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return False
        return self.isclose(other)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return f"[{self.alpha:.12g}:{self.beta:.12g}]"


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """
    Tuple of d+1 real n x n coefficient matrices, stored as a (d+1, n, n) array.
    """
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.ndim != 3 or coeffs.shape[1] != coeffs.shape[2]:
            raise InvalidMatrixPolynomial(
                f"Coefficients must have shape (d+1, n, n), got {coeffs.shape}"
            )
        if coeffs.shape[0] < 2 or coeffs.shape[1] < 1:
            raise InvalidMatrixPolynomial("Need degree d >= 1 and dimension n >= 1")
        if not np.all(np.isfinite(coeffs)):
            raise InvalidMatrixPolynomial("Coefficient matrices must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_matrices(cls, matrices: Sequence[Any]) -> "MatrixPolynomial":
        """
        Build a matrix polynomial from the list (A_0, ..., A_d).
        """
        return cls(np.array([np.atleast_2d(np.asarray(m, dtype=float)) for m in matrices]))

    @property
    def n(self) -> int:
        return int(self.coeffs.shape[1])

    @property
    def d(self) -> int:
        return int(self.coeffs.shape[0] - 1)

    def to_dict(self) -> Dict[str, Any]:
        """
        JSON document {"n": int, "d": int, "matrices": [...]}.
        """
        return {"n": self.n, "d": self.d, "matrices": self.coeffs.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MatrixPolynomial":
        """
        Parse the JSON document produced by to_dict.

        Raises:
            InvalidMatrixPolynomial: If the declared n and d disagree with the matrices
        """
        try:
            mp = cls.from_matrices(data["matrices"])
        except KeyError:
            raise InvalidMatrixPolynomial("Document has no 'matrices' entry")
        except ValueError as e:
            raise InvalidMatrixPolynomial(f"Malformed matrices: {e}")
        if int(data.get("n", mp.n)) != mp.n or int(data.get("d", mp.d)) != mp.d:
            raise InvalidMatrixPolynomial(
                f"Declared n={data.get('n')}, d={data.get('d')} do not match "
                f"matrices of shape {mp.coeffs.shape}"
            )
        return mp

    def __eq__(self, other):
        if not isinstance(other, MatrixPolynomial):
            return False
        return self.coeffs.shape == other.coeffs.shape and bool(
            np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class BinaryFormBasis:
    """
    A basis (f_0, ..., f_d) of binary forms of degree d.

    Row i of ``transform`` holds the monomial coordinates of f_i, that is
    f_i = sum_j transform[i, j] alpha^j beta^(d-j).
    """
    d: int
    transform: np.ndarray = field(repr=False)

    def __post_init__(self):
        transform = np.array(self.transform, dtype=float)
        if transform.shape != (self.d + 1, self.d + 1):
            raise ValueError(
                f"Transform must be ({self.d + 1}, {self.d + 1}), got {transform.shape}"
            )
        transform.setflags(write=False)
        object.__setattr__(self, "transform", transform)

    @classmethod
    def monomial(cls, d: int) -> "BinaryFormBasis":
        return cls(d, np.eye(d + 1))

    @classmethod
    def random_orthogonal(cls, d: int, rng: np.random.Generator) -> "BinaryFormBasis":
        """
        Haar-distributed orthogonal transform (QR of a Gaussian matrix, R diagonal made positive).
        """
        q, r = np.linalg.qr(rng.standard_normal((d + 1, d + 1)))
        q = q * np.sign(np.diagonal(r))
        return cls(d, q)

    def is_invertible(self) -> bool:
        """
        Relative invertibility test against the Hadamard bound of the rows.
        """
        scale = float(np.prod(np.linalg.norm(self.transform, axis=1)))
        if scale == 0.0:
            return False
        return abs(float(np.linalg.det(self.transform))) > TRANSFORM_DET_TOL * scale

    def evaluate_forms(self, pt: ProjectivePoint) -> np.ndarray:
        """
        Values (f_0(alpha, beta), ..., f_d(alpha, beta)).
        """
        return self.transform @ monomial_weights(self.d, pt)


def monomial_weights(d: int, pt: ProjectivePoint) -> np.ndarray:
    """
    Vector (alpha^i beta^(d-i))_{i=0..d}.
    """
    i = np.arange(d + 1)
    return np.power(pt.alpha, i) * np.power(pt.beta, d - i)


def evaluate(mp: MatrixPolynomial, pt: ProjectivePoint) -> np.ndarray:
    """
    Evaluate P(A, alpha, beta) = sum_i alpha^i beta^(d-i) A_i.

    Horner accumulation in the two homogeneous variables:
    acc <- alpha * acc + beta^(d-i) * A_i for i = d-1, ..., 0.

    Args:
        mp: Matrix polynomial
        pt: Point on the unit circle

    Returns:
        np.ndarray: n x n matrix
    """
    d = mp.d
    acc = mp.coeffs[d].copy()
    beta_power = 1.0
    for i in range(d - 1, -1, -1):
        beta_power *= pt.beta
        acc = pt.alpha * acc + beta_power * mp.coeffs[i]
    return acc


def evaluate_partials(mp: MatrixPolynomial, pt: ProjectivePoint) -> Tuple[np.ndarray, np.ndarray]:
    """
    Partial derivatives of P(A, alpha, beta) in alpha and in beta.

    Exponents are differentiated symbolically; terms whose coefficient vanishes
    are skipped so no negative power is ever formed.

    Args:
        mp: Matrix polynomial
        pt: Point on the unit circle

    Returns:
        Tuple[np.ndarray, np.ndarray]: (dP/dalpha, dP/dbeta)
    """
    d, n = mp.d, mp.n
    d_alpha = np.zeros((n, n))
    d_beta = np.zeros((n, n))
    for i in range(d + 1):
        if i > 0:
            d_alpha += i * pt.alpha ** (i - 1) * pt.beta ** (d - i) * mp.coeffs[i]
        if i < d:
            d_beta += (d - i) * pt.alpha ** i * pt.beta ** (d - i - 1) * mp.coeffs[i]
    return d_alpha, d_beta


def frobenius_norm(mp: MatrixPolynomial) -> float:
    """
    Norm of the product space: sqrt(||A_0||_F^2 + ... + ||A_d||_F^2).
    """
    return float(np.sqrt(np.sum(mp.coeffs * mp.coeffs)))


def apply_coefficient_map(mp: MatrixPolynomial, basis: BinaryFormBasis) -> MatrixPolynomial:
    """
    Rewrite mp in the monomial basis when its coefficients multiply the forms of ``basis``.

    Returns mp' with A'_j = sum_i t_ij A_i, so that
    sum_i f_i(alpha, beta) A_i = sum_j alpha^j beta^(d-j) A'_j.
    Applying t1 then t2 equals applying t1 @ t2.

    Args:
        mp: Matrix polynomial with coefficients attached to the basis forms
        basis: Basis of binary forms of degree mp.d

    Returns:
        MatrixPolynomial: Coefficients in the monomial basis

    Raises:
        ValueError: If the basis degree differs from mp.d
        SingularTransform: If the transform is not invertible
    """
    if basis.d != mp.d:
        raise ValueError(f"Basis degree {basis.d} does not match polynomial degree {mp.d}")
    if not basis.is_invertible():
        raise SingularTransform("Coefficient transform is numerically singular")
    return MatrixPolynomial(np.tensordot(basis.transform.T, mp.coeffs, axes=1))


def scale_coeffs(mp: MatrixPolynomial, t: float) -> MatrixPolynomial:
    """
    The matrix polynomial t * A.
    """
    return MatrixPolynomial(t * mp.coeffs)


def orthogonal_transform(mp: MatrixPolynomial, u: np.ndarray, v: np.ndarray) -> MatrixPolynomial:
    """
    Replace every A_i by U A_i V^T.
    """
    return MatrixPolynomial(np.einsum("ab,ibc,dc->iad", u, mp.coeffs, v))


def elementary_direction(mp: MatrixPolynomial, index: int) -> np.ndarray:
    """
    The index-th member of the standard orthonormal basis of the input space,
    shaped like mp.coeffs.
    """
    e = np.zeros(mp.coeffs.size)
    e[index] = 1.0
    return e.reshape(mp.coeffs.shape)


def perturbed(mp: MatrixPolynomial, direction: np.ndarray, h: float) -> MatrixPolynomial:
    return MatrixPolynomial(mp.coeffs + h * direction)


def random_orthogonal_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diagonal(r))
