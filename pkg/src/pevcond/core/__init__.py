# Core algebra and shared plumbing

from pevcond.core.matpoly import (
    PevcondError,
    InvalidMatrixPolynomial,
    SingularTransform,
    ProjectivePoint,
    MatrixPolynomial,
    BinaryFormBasis,
    monomial_weights,
    evaluate,
    evaluate_partials,
    frobenius_norm,
    apply_coefficient_map,
    scale_coeffs,
    orthogonal_transform,
    elementary_direction,
    perturbed,
    random_orthogonal_matrix,
)

from pevcond.core.event_system import (
    EventType,
    Event,
    EventListener,
    EventBus,
    LoggingListener,
    InvalidTrialCounter,
)

__all__ = [
    # Matrix polynomials
    'PevcondError',
    'InvalidMatrixPolynomial',
    'SingularTransform',
    'ProjectivePoint',
    'MatrixPolynomial',
    'BinaryFormBasis',
    'monomial_weights',
    'evaluate',
    'evaluate_partials',
    'frobenius_norm',
    'apply_coefficient_map',
    'scale_coeffs',
    'orthogonal_transform',
    'elementary_direction',
    'perturbed',
    'random_orthogonal_matrix',

    # Event System
    'EventType',
    'Event',
    'EventListener',
    'EventBus',
    'LoggingListener',
    'InvalidTrialCounter',
]
