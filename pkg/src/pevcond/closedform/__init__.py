# Closed-form expectations, bounds and volume ratios

from pevcond.closedform.special import (
    DomainError,
    log_gamma,
    gamma_ratio,
    compensated_sum,
)

from pevcond.closedform.formulas import (
    FormulaId,
    ClosedFormValue,
    vol_ratio_full,
    vol_ratio_sym,
    vol_ratio_sym_asymptotic,
    expected_mu_subspace,
    upper_bound,
    expected_mu_full_gaussian,
    asymptotic_full_gaussian,
    expected_mu_goe,
    expected_mu_goe_direct,
    asymptotic_goe,
)

__all__ = [
    # Special functions
    'DomainError',
    'log_gamma',
    'gamma_ratio',
    'compensated_sum',

    # Formulas
    'FormulaId',
    'ClosedFormValue',
    'vol_ratio_full',
    'vol_ratio_sym',
    'vol_ratio_sym_asymptotic',
    'expected_mu_subspace',
    'upper_bound',
    'expected_mu_full_gaussian',
    'asymptotic_full_gaussian',
    'expected_mu_goe',
    'expected_mu_goe_direct',
    'asymptotic_goe',
]
