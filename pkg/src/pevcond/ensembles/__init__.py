# Seeded random matrix polynomial ensembles

from pevcond.ensembles.rng import (
    RngKey,
    generator_for,
)

from pevcond.ensembles.sampler import (
    BadBasis,
    EnsembleKind,
    EnsembleSpec,
    sym_orthonormal_basis,
    gram_matrix,
    sample,
)

__all__ = [
    # Random streams
    'RngKey',
    'generator_for',

    # Ensembles
    'BadBasis',
    'EnsembleKind',
    'EnsembleSpec',
    'sym_orthonormal_basis',
    'gram_matrix',
    'sample',
]
