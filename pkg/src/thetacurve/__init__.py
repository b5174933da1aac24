"""Prime decompositions of theta-curves, knots and 3-manifolds in a free model."""

from .algebra import (
    S3,
    TRIVIAL_THETA,
    UNKNOT,
    AlgebraError,
    Kind,
    KnotNF,
    Label,
    LabeledKnot,
    ManifoldNF,
    Multiset,
    PrimeGenerator,
    Registry,
    ThetaNF,
    connected_sum_knot,
    connected_sum_manifold,
    equals,
    flat_knot,
    is_knot_like,
    is_prime,
    is_trivial,
    knot_insertion,
    knot_prime,
    manifold_prime,
    prime_factorization,
    product,
    tau_label,
    tau_manifold,
    theta_prime,
    vertex_product,
)
from .expr import evaluate, parse, to_text
from .gamma import GammaVertex, build_gamma, canonical_vertex, expected_root, verify_unique_root, vertex_of
from .roots import ReductionGraph, check_EE, check_F, roots_of, verify_diamond

__version__ = "0.1.0"
