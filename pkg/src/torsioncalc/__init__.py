"""Exact tensor calculus for affine connections with torsion.

The package verifies, by exact computation on polynomial fields over the
rationals, the linear structure of covariant derivatives on spaces with a
non-symmetric connection: the relations among the five derivative rules, the
family of Ricci-type identities and its seventeen-member catalogue, the
five-parameter curvature family, and a four-dimensional cosmology example
with torsion sourced by one off-diagonal metric function.
"""

__version__ = "0.1.0"

from .algebra import (
    LinearSystem,
    Rational,
    RationalMatrix,
    ScalarField,
    TensorField,
    matrix_rank,
    poly_partial,
    tensor_contract,
)
from .connection import (
    ALL_KINDS,
    DEPENDENT_TRIPLES,
    DERIVATIVE_RELATIONS,
    INDEPENDENT_TRIPLES,
    ConnectionField,
    DerivKind,
    covariant_derivative,
    decompose_connection,
    derivative_kind_rank,
    double_covariant_derivative,
    double_covariant_derivative_explicit,
    verify_derivative_relations,
)
from .curvature import (
    CURVATURE_R_MEMBER,
    INDEPENDENT_SIX_SETS,
    CurvatureReport,
    RhoCoefficients,
    bracket_objects,
    bracket_objects_raw,
    curvature_R,
    curvature_report,
    rho,
    rho_catalogue,
    rho_family_rank,
    six_set_members,
)
from .ricci import (
    ALL_COMBINATIONS,
    CATALOGUE_BY_PQRS,
    IdentityAmbiguityError,
    IdentityCoefficients,
    IdentityUnsolvableError,
    IdentityWorkspace,
    MixWeights,
    catalogue_independence_rank,
    evaluate_identity_rhs,
    identity_catalogue,
    identity_row,
    solve_all_identities,
    solve_identity_coefficients,
    solved_span_rank,
    verify_expanded_identity,
    verify_identity,
    verify_mixed_family,
)
from .metrics import (
    GeneralizedMetric,
    SingularMetricError,
    christoffel_first_kind_antisym,
    christoffel_generalized,
    einstein_metricity_residual,
)
from .ratfunc import Poly, RationalFunction
from .cosmology import (
    CosmologyMetric,
    antisym_christoffel_table,
    energy_momentum,
    matter_lagrangian,
    recover_n,
    scalar_curvature,
    scalar_curvature_family,
)
