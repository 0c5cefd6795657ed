"""
Random matrix polynomial ensembles.

  - gaussian: every entry of every A_i i.i.d. N(0, 1);
  - goe: A_i = (G + G^T) / 2 with G entrywise N(0, 1), the standard normal on
    symmetric matrices under the Frobenius inner product (diagonal variance 1,
    off-diagonal variance 1/2);
  - subspace: A_i = sum_j c_ij B_j with c_ij i.i.d. N(0, 1) over a Frobenius
    orthonormal basis B_1, ..., B_k.

Normal variates come from numpy's ziggurat ``standard_normal`` on a Philox
stream keyed by RngKey.
"""

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from pevcond.core.matpoly import MatrixPolynomial, PevcondError
from pevcond.ensembles.rng import RngKey


logger = logging.getLogger(__name__)

ORTHONORMAL_TOL = 1e-10


class BadBasis(PevcondError, ValueError):
    """
    Raised when a subspace basis is missing, misshaped or not Frobenius orthonormal.
    """
    pass


class EnsembleKind(enum.Enum):
    GAUSSIAN = "gaussian"
    GOE = "goe"
    SUBSPACE = "subspace"

    def __str__(self) -> str:
        return self.value


def sym_orthonormal_basis(n: int) -> np.ndarray:
    """
    The basis {E_ii} followed by {(E_ij + E_ji)/sqrt(2) : i < j} of Sym(n), shape (n(n+1)/2, n, n).
    """
    if n < 1:
        raise ValueError(f"Dimension must be positive, got {n}")
    basis = []
    for i in range(n):
        e = np.zeros((n, n))
        e[i, i] = 1.0
        basis.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n))
            e[i, j] = e[j, i] = 1.0 / math.sqrt(2.0)
            basis.append(e)
    return np.array(basis)


def gram_matrix(basis: np.ndarray) -> np.ndarray:
    flat = basis.reshape(basis.shape[0], -1)
    return flat @ flat.T


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    """
    Which ensemble to draw (d+1)-tuples of n x n matrices from.

    ``basis`` is required for the subspace kind, shape (k, n, n).
    """
    kind: EnsembleKind
    n: int
    d: int
    basis: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind(self.kind))
        if self.n < 1 or self.d < 1:
            raise ValueError(f"Need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        if self.kind is not EnsembleKind.SUBSPACE:
            if self.basis is not None:
                raise BadBasis(
                    f"A basis is only meaningful for subspace ensembles, not {self.kind}"
                )
            return
        if self.basis is None:
            raise BadBasis("Subspace ensembles need a basis")
        basis = np.array(self.basis, dtype=float)
        if basis.ndim != 3 or basis.shape[0] < 1 or basis.shape[1:] != (self.n, self.n):
            raise BadBasis(f"Basis must have shape (k, {self.n}, {self.n}), got {basis.shape}")
        error = float(np.max(np.abs(gram_matrix(basis) - np.eye(basis.shape[0]))))
        if error > ORTHONORMAL_TOL:
            raise BadBasis(f"Basis is not Frobenius orthonormal (Gram error {error:.3e})")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def gaussian(cls, n: int, d: int) -> "EnsembleSpec":
        return cls(EnsembleKind.GAUSSIAN, n, d)

    @classmethod
    def goe(cls, n: int, d: int) -> "EnsembleSpec":
        return cls(EnsembleKind.GOE, n, d)

    @classmethod
    def subspace(cls, n: int, d: int, basis: Optional[np.ndarray] = None) -> "EnsembleSpec":
        """
        Subspace ensemble; the symmetric-matrix basis is used when none is given.
        """
        if basis is None:
            basis = sym_orthonormal_basis(n)
        return cls(EnsembleKind.SUBSPACE, n, d, basis)

    @property
    def k(self) -> int:
        """
        Dimension of the coefficient subspace.
        """
        if self.kind is EnsembleKind.GAUSSIAN:
            return self.n * self.n
        if self.kind is EnsembleKind.GOE:
            return self.n * (self.n + 1) // 2
        return int(self.basis.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": str(self.kind), "n": self.n, "d": self.d}
        if self.basis is not None:
            data["basis"] = self.basis.tolist()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EnsembleSpec":
        try:
            kind = EnsembleKind(data["kind"])
            n, d = int(data["n"]), int(data["d"])
        except (KeyError, ValueError) as e:
            raise ValueError(f"Malformed ensemble spec: {e}")
        basis = data.get("basis")
        return cls(kind, n, d, None if basis is None else np.array(basis, dtype=float))


def sample(spec: EnsembleSpec, key: RngKey) -> MatrixPolynomial:
    """
    Draw one matrix polynomial from the ensemble.

    Args:
        spec: Ensemble
        key: Seed and stream; the same key always gives the same polynomial

    Returns:
        MatrixPolynomial: Coefficients (A_0, ..., A_d)
    """
    rng = key.generator()
    shape = (spec.d + 1, spec.n, spec.n)
    if spec.kind is EnsembleKind.GAUSSIAN:
        return MatrixPolynomial(rng.standard_normal(shape))
    if spec.kind is EnsembleKind.GOE:
        g = rng.standard_normal(shape)
        return MatrixPolynomial((g + np.transpose(g, (0, 2, 1))) / 2.0)
    c = rng.standard_normal((spec.d + 1, spec.k))
    return MatrixPolynomial(np.tensordot(c, spec.basis, axes=1))
