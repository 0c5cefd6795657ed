# Determinant forms and their real projective roots

from pevcond.solver.sturm import (
    InconclusiveChain,
    horner_homogeneous,
    build_chain,
    sign_variations,
    count_between,
    cauchy_bound,
)

from pevcond.solver.pevsolver import (
    DegreeOverflow,
    DegenerateForm,
    ClusterWarning,
    DeterminantCurve,
    BinaryForm,
    RootSet,
    Degenerate,
    det_binary_form,
    sturm_root_count,
    real_projective_roots,
    polynomial_eigenvalues,
)

__all__ = [
    # Sturm chains
    'InconclusiveChain',
    'horner_homogeneous',
    'build_chain',
    'sign_variations',
    'count_between',
    'cauchy_bound',

    # Eigenvalue solver
    'DegreeOverflow',
    'DegenerateForm',
    'ClusterWarning',
    'DeterminantCurve',
    'BinaryForm',
    'RootSet',
    'Degenerate',
    'det_binary_form',
    'sturm_root_count',
    'real_projective_roots',
    'polynomial_eigenvalues',
]
