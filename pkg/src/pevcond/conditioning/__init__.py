# Condition numbers of real polynomial eigenvalues

from pevcond.conditioning.jacobi_svd import (
    JacobiNotConverged,
    SvdResult,
    jacobi_svd,
)

from pevcond.conditioning.condition import (
    NotAnEigenvalue,
    RootTrackingLost,
    PevRecord,
    ConditionReport,
    eigenvectors_at,
    local_condition,
    total_condition,
    finite_difference_condition,
)

__all__ = [
    # SVD
    'JacobiNotConverged',
    'SvdResult',
    'jacobi_svd',

    # Condition numbers
    'NotAnEigenvalue',
    'RootTrackingLost',
    'PevRecord',
    'ConditionReport',
    'eigenvectors_at',
    'local_condition',
    'total_condition',
    'finite_difference_condition',
]
