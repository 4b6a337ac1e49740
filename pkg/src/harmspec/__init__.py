"""Singular values and eigenvalue decay for operators on harmonic function spaces.

Exact spectra of ball embeddings, exponential-class gauges, relative-cover
bounds, and numerical checks built from harmonic polynomial bases.
"""

from .ball import (DecayBound, ExactBallSpectrum, asymptotic_log_rate, exact_gauge,
                   exact_singular_value, product_gap, product_gap_limit, sup_log_defect)
from .covers import (RelativeCover, efficiency, eigenvalue_bound, embedding_bound,
                     greedy_cover, natural_cover, validate_cover)
from .dims import degree_of_index, h_dim, n_dim
from .embedding import embedding_matrix, verify_prop34
from .expo import (ExponentialGauge, FiniteSpectrum, compose_gauge, eigen_rate_transfer,
                   interleave_counterexample, sequence_gauge, sum_gauge, sum_rate)
from .geometry import BallSpec, DomainUnion, load_geometry
from .harmonic import (ball_inner_product, harmonic_space, orthonormal_basis, sphere_moment)

__version__ = "0.1.0"

__all__ = [
    "DecayBound", "ExactBallSpectrum", "asymptotic_log_rate", "exact_gauge",
    "exact_singular_value", "product_gap", "product_gap_limit", "sup_log_defect",
    "RelativeCover", "efficiency", "eigenvalue_bound", "embedding_bound", "greedy_cover",
    "natural_cover", "validate_cover", "degree_of_index", "h_dim", "n_dim",
    "embedding_matrix", "verify_prop34", "ExponentialGauge", "FiniteSpectrum",
    "compose_gauge", "eigen_rate_transfer", "interleave_counterexample", "sequence_gauge",
    "sum_gauge", "sum_rate", "BallSpec", "DomainUnion", "load_geometry",
    "ball_inner_product", "harmonic_space", "orthonormal_basis", "sphere_moment",
]
