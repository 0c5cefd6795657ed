"""
Closed-form expected condition numbers, the universal bound and volume ratios.

For a subspace V of dimension k whose singular matrices form a hypersurface,
with coefficients drawn i.i.d. from the standard normal on V,

    E mu(A) = sqrt(pi) * Gamma((d+1)k/2) / Gamma(((d+1)k - 1)/2) * vol_ratio(V),

where vol_ratio(V) = |Sigma_V on S^(k-1)| / |S^(k-2)|. The Gaussian and GOE
expectations are this formula with the volume ratios of M(n) and Sym(n).
"""

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict

from pevcond.closedform.special import DomainError, compensated_sum, gamma_ratio, log_gamma


logger = logging.getLogger(__name__)

SYM_EXACT_LIMIT = 201
DUAL_PATH_TOL = 1e-12
SQRT_PI = math.sqrt(math.pi)


class FormulaId(enum.Enum):
    GAUSSIAN_EXACT = "GaussianExact"
    GAUSSIAN_ASYMPTOTIC = "GaussianAsymptotic"
    GOE_EVEN_EXACT = "GoeEvenExact"
    GOE_ODD_EXACT = "GoeOddExact"
    GOE_ASYMPTOTIC = "GoeAsymptotic"
    SUBSPACE_EXACT = "SubspaceExact"
    UNIVERSAL_BOUND = "UniversalBound"
    VOL_RATIO_FULL = "VolRatioFull"
    VOL_RATIO_SYM_EVEN = "VolRatioSymEven"
    VOL_RATIO_SYM_ODD = "VolRatioSymOdd"
    VOL_RATIO_SYM_ASYMPTOTIC = "VolRatioSymAsymptotic"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ClosedFormValue:
    """
    A closed-form constant with the formula and parameters it came from.

    ``approximate`` marks values where an asymptotic replaced the exact
    expression; ``formal`` marks the k = 1 evaluation of the subspace formula.
    """
    value: float
    formula_id: FormulaId
    params: Dict[str, Any] = field(default_factory=dict)
    approximate: bool = False
    formal: bool = False

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "formula_id": str(self.formula_id),
            "params": dict(self.params),
            "approximate": self.approximate,
            "formal": self.formal,
        }


def _check_positive_int(**values: int) -> None:
    for name, value in values.items():
        if isinstance(value, bool) or int(value) != value or value < 1:
            raise DomainError(f"{name} must be a positive integer, got {value!r}")


def _normal_ratio(k: int, d: int) -> float:
    """
    Gamma((d+1)k/2) / Gamma(((d+1)k - 1)/2), the mean length factor of the formulas.
    """
    dim = (d + 1) * k
    return gamma_ratio(dim / 2.0, (dim - 1) / 2.0)


def vol_ratio_full(n: int) -> ClosedFormValue:
    """
    Volume ratio of singular n x n matrices: sqrt(pi) Gamma((n+1)/2) / Gamma(n/2).
    """
    _check_positive_int(n=n)
    return ClosedFormValue(
        value=SQRT_PI * gamma_ratio((n + 1) / 2.0, n / 2.0),
        formula_id=FormulaId.VOL_RATIO_FULL,
        params={"n": n},
    )


def vol_ratio_sym_asymptotic(n: int) -> ClosedFormValue:
    _check_positive_int(n=n)
    return ClosedFormValue(
        value=2.0 * math.sqrt(n) / SQRT_PI,
        formula_id=FormulaId.VOL_RATIO_SYM_ASYMPTOTIC,
        params={"n": n},
        approximate=True,
    )


def vol_ratio_sym(n: int) -> ClosedFormValue:
    """
    Volume ratio of singular symmetric n x n matrices.

    Even n: sqrt(2/pi) n Gamma((n+1)/2) / Gamma((n+2)/2).
    Odd n = 2m+1:

        (-1)^m sqrt(pi) n! / (2^n m! Gamma((n+2)/2))
            * (1 - (4 sqrt(2) / sqrt(pi)) sum_{i<m} (-1)^i Gamma(i + 3/2) / i!)

    with the factorial and Gamma factors taken in log space and the
    alternating sum compensated. For odd n above SYM_EXACT_LIMIT the
    asymptotic 2 sqrt(n) / sqrt(pi) is returned, flagged approximate.

    Args:
        n: Matrix dimension

    Returns:
        ClosedFormValue: VolRatioSymEven, VolRatioSymOdd or VolRatioSymAsymptotic
    """
    _check_positive_int(n=n)
    if n % 2 == 0:
        return ClosedFormValue(
            value=math.sqrt(2.0 / math.pi) * n * gamma_ratio((n + 1) / 2.0, (n + 2) / 2.0),
            formula_id=FormulaId.VOL_RATIO_SYM_EVEN,
            params={"n": n},
        )
    if n > SYM_EXACT_LIMIT:
        logger.warning(f"vol_ratio_sym({n}): odd n above {SYM_EXACT_LIMIT}, using the asymptotic")
        return vol_ratio_sym_asymptotic(n)

    m = (n - 1) // 2
    log_prefactor = (
        0.5 * math.log(math.pi) + log_gamma(n + 1.0) - n * math.log(2.0)
        - log_gamma(m + 1.0) - log_gamma((n + 2) / 2.0)
    )
    weight = 4.0 * math.sqrt(2.0) / SQRT_PI
    terms = [1.0]
    for i in range(m):
        term = weight * math.exp(log_gamma(i + 1.5) - log_gamma(i + 1.0))
        terms.append(term if i % 2 else -term)
    bracket = compensated_sum(terms)
    sign = -1.0 if m % 2 else 1.0
    return ClosedFormValue(
        value=sign * math.exp(log_prefactor) * bracket,
        formula_id=FormulaId.VOL_RATIO_SYM_ODD,
        params={"n": n},
    )


def expected_mu_subspace(
    k: int,
    d: int,
    vol_ratio: float,
    allow_formal: bool = False
) -> ClosedFormValue:
    """
    E mu(A) for the standard normal on a k-dimensional subspace V, given vol_ratio(V).

    The formula divides by the volume of S^(k-2), so k = 1 has only a formal
    meaning; it is accepted when ``allow_formal`` is set and the result is
    marked formal.

    Args:
        k: Dimension of V
        d: Degree
        vol_ratio: |Sigma_V on S^(k-1)| / |S^(k-2)|, nonnegative

    Returns:
        ClosedFormValue: SubspaceExact

    Raises:
        DomainError: If k < 2 without allow_formal, d < 1 or vol_ratio < 0
    """
    _check_positive_int(k=k, d=d)
    if k < 2 and not allow_formal:
        raise DomainError("expected_mu_subspace needs k >= 2; k = 1 is only a formal value")
    if not math.isfinite(vol_ratio) or vol_ratio < 0.0:
        raise DomainError(f"vol_ratio must be finite and nonnegative, got {vol_ratio}")
    return ClosedFormValue(
        value=SQRT_PI * _normal_ratio(k, d) * vol_ratio,
        formula_id=FormulaId.SUBSPACE_EXACT,
        params={"k": k, "d": d, "vol_ratio": vol_ratio},
        formal=k < 2,
    )


def upper_bound(n: int, k: int, d: int) -> ClosedFormValue:
    """
    Universal bound sqrt(pi) n Gamma((d+1)k/2) / Gamma(((d+1)k - 1)/2) for any k-dimensional V.
    """
    _check_positive_int(n=n, k=k, d=d)
    return ClosedFormValue(
        value=SQRT_PI * n * _normal_ratio(k, d),
        formula_id=FormulaId.UNIVERSAL_BOUND,
        params={"n": n, "k": k, "d": d},
    )


def expected_mu_full_gaussian(n: int, d: int) -> ClosedFormValue:
    """
    E mu(A) for A_0, ..., A_d i.i.d. standard Gaussian n x n matrices.

    pi * Gamma((d+1)n^2/2) / Gamma(((d+1)n^2 - 1)/2) * Gamma((n+1)/2) / Gamma(n/2)
    """
    _check_positive_int(n=n, d=d)
    return ClosedFormValue(
        value=math.pi * _normal_ratio(n * n, d) * gamma_ratio((n + 1) / 2.0, n / 2.0),
        formula_id=FormulaId.GAUSSIAN_EXACT,
        params={"n": n, "d": d},
    )


def asymptotic_full_gaussian(n: int, d: int) -> ClosedFormValue:
    _check_positive_int(n=n, d=d)
    return ClosedFormValue(
        value=math.pi / 2.0 * math.sqrt((d + 1) * n ** 3),
        formula_id=FormulaId.GAUSSIAN_ASYMPTOTIC,
        params={"n": n, "d": d},
        approximate=True,
    )


def expected_mu_goe_direct(n: int, d: int) -> ClosedFormValue:
    """
    Even-n GOE expectation written out directly:
    sqrt(2) n Gamma((d+1)n(n+1)/4) / Gamma(((d+1)n(n+1) - 2)/4) * Gamma((n+1)/2) / Gamma((n+2)/2).

    Raises:
        DomainError: If n is odd
    """
    _check_positive_int(n=n, d=d)
    if n % 2:
        raise DomainError(f"The direct GOE formula holds for even n only, got n={n}")
    dim = (d + 1) * n * (n + 1)
    return ClosedFormValue(
        value=(
            math.sqrt(2.0) * n * gamma_ratio(dim / 4.0, (dim - 2) / 4.0)
            * gamma_ratio((n + 1) / 2.0, (n + 2) / 2.0)
        ),
        formula_id=FormulaId.GOE_EVEN_EXACT,
        params={"n": n, "d": d},
    )


def expected_mu_goe(n: int, d: int) -> ClosedFormValue:
    """
    E mu(A) for A_0, ..., A_d i.i.d. GOE(n) matrices.

    Evaluated as expected_mu_subspace(n(n+1)/2, d, vol_ratio_sym(n)). For even
    n the result is checked against expected_mu_goe_direct. For n = 1 the
    subspace formula is only formal, and its value coincides with the n = 1
    Gaussian expectation.

    Args:
        n: Matrix dimension
        d: Degree

    Returns:
        ClosedFormValue: GoeEvenExact or GoeOddExact
    """
    _check_positive_int(n=n, d=d)
    k = n * (n + 1) // 2
    vol = vol_ratio_sym(n)
    composed = expected_mu_subspace(k, d, vol.value, allow_formal=True)
    if n % 2 == 0:
        direct = expected_mu_goe_direct(n, d)
        if abs(composed.value - direct.value) > DUAL_PATH_TOL * direct.value:
            logger.error(
                f"GOE dual-path mismatch at n={n}, d={d}: {composed.value!r} vs {direct.value!r}"
            )
    return ClosedFormValue(
        value=composed.value,
        formula_id=FormulaId.GOE_EVEN_EXACT if n % 2 == 0 else FormulaId.GOE_ODD_EXACT,
        params={"n": n, "d": d, "k": k},
        approximate=vol.approximate,
        formal=composed.formal,
    )


def asymptotic_goe(n: int, d: int) -> ClosedFormValue:
    _check_positive_int(n=n, d=d)
    return ClosedFormValue(
        value=math.sqrt((d + 1) * n ** 3),
        formula_id=FormulaId.GOE_ASYMPTOTIC,
        params={"n": n, "d": d},
        approximate=True,
    )
