from fractions import Fraction

import pytest

from torsioncalc.algebra import RationalMatrix, matrix_rank
from torsioncalc.connection import double_covariant_derivative
from torsioncalc.curvature import curvature_R
from torsioncalc.ricci import (
    ALL_COMBINATIONS,
    CATALOGUE_BY_PQRS,
    IdentityCoefficients,
    IdentityWorkspace,
    MixWeights,
    catalogue_independence_rank,
    evaluate_identity_rhs,
    identity_catalogue,
    identity_row,
    solve_identity_coefficients,
    verify_expanded_identity,
    verify_identity,
    verify_mixed_family,
)
from torsioncalc.sampling import (
    derive_rng,
    random_symmetric_connection,
    random_tensor_field,
)

from conftest import make_instance

# ---------------------------------------------------------------------------
# catalogue data
# ---------------------------------------------------------------------------


def test_catalogue_size_and_tags():
    catalogue = identity_catalogue()
    assert len(catalogue) == 17
    assert catalogue[0].tag == "ric11-11"
    assert CATALOGUE_BY_PQRS[(1, 2, 1, 1)].tag == "ric12-11"
    assert all(len(ic.c) == 17 for ic in catalogue)


def test_catalogue_entry_1111():
    c = CATALOGUE_BY_PQRS[(1, 1, 1, 1)].c
    assert c == (0, 0, -1, 0, 0, 1, -1, 1, -1, -1, 1, -1, 1, -1, -1, 0, 0)


def test_catalogue_entry_2222_torsion_derivative_sign():
    c = CATALOGUE_BY_PQRS[(2, 2, 2, 2)].c
    assert c[2] == 1  # the +2 T a| term
    assert c[:2] == (0, 0) and c[3:5] == (0, 0)


def test_catalogue_entry_3333_single_positive_derivative_term():
    c = CATALOGUE_BY_PQRS[(3, 3, 3, 3)].c
    assert c[2] == 1
    assert all(v == 0 for k, v in enumerate(c[:5]) if k != 2)


def test_coefficient_entries_bounded():
    with pytest.raises(ValueError):
        IdentityCoefficients((2,) + (0,) * 16, (1, 1, 1, 1))
    with pytest.raises(ValueError):
        IdentityCoefficients((0,) * 16, (1, 1, 1, 1))


def test_catalogue_rank_is_sixteen():
    # one member is an exact combination of three others: the corrected
    # (1,3,1,2) member satisfies (12-11) - (13-11) - (12-12) + (13-12) = 0,
    # so the seventeen chosen members span a 16-dimensional space
    assert catalogue_independence_rank() == 16


def test_four_member_dependency_is_structural():
    L, a = make_instance(21, "dep", 3)
    ws = IdentityWorkspace(a, L)
    total = None
    for pqrs in ((1, 2, 1, 1), (1, 3, 1, 2)):
        t = ws.lhs(pqrs)
        total = t if total is None else total + t
    for pqrs in ((1, 3, 1, 1), (1, 2, 1, 2)):
        total = total - ws.lhs(pqrs)
    assert total.is_zero()


def test_square_quadruple_lhs_sums_to_four_commutators():
    L, a = make_instance(22, "quad", 3)
    ws = IdentityWorkspace(a, L)
    total = None
    for pqrs in ((1, 1, 1, 1), (2, 2, 2, 2), (1, 2, 1, 2), (2, 1, 2, 1)):
        t = ws.lhs(pqrs)
        total = t if total is None else total + t
    assert total == ws.r_commutator().scale(4)


def test_completion_to_rank_seventeen():
    rows = [identity_row(ic) for ic in identity_catalogue()]
    extra = solve_identity_coefficients((3, 2, 3, 2), dims=(3,), verify_dims=(3,))
    rows.append(identity_row(extra))
    assert matrix_rank(RationalMatrix(rows)) == 17


# ---------------------------------------------------------------------------
# right-side evaluation
# ---------------------------------------------------------------------------


def test_torsion_free_rhs_is_commutator():
    rng = derive_rng(23, "tf")
    L = random_symmetric_connection(rng, 3, degree=1)
    a = random_tensor_field(rng, 3, (1, 1), degree=1)
    ws = IdentityWorkspace(a, L)
    R = curvature_R(L)
    for pqrs in ((1, 1, 1, 1), (2, 3, 2, 3)):
        rhs = ws.rhs(CATALOGUE_BY_PQRS[pqrs])
        assert rhs == ws.r_commutator()
    # and the left side agrees: all rules reduce to the single derivative
    assert ws.lhs((1, 1, 1, 1)) == ws.r_commutator()


def test_zero_coefficients_leave_commutator():
    L, a = make_instance(24, "zc", 2)
    zero = IdentityCoefficients((0,) * 17, (1, 1, 1, 1))
    ws = IdentityWorkspace(a, L)
    assert evaluate_identity_rhs(zero, a, L) == ws.r_commutator()


def test_rhs_matches_composition_for_1111():
    L, a = make_instance(25, "cmp", 3)
    lhs = double_covariant_derivative(1, 1, a, L) - double_covariant_derivative(
        1, 1, a, L
    ).swap_last_lower()
    rhs = evaluate_identity_rhs(CATALOGUE_BY_PQRS[(1, 1, 1, 1)], a, L)
    assert lhs == rhs


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------


def test_residuals_spot_combinations():
    for idx in range(3):
        L, a = make_instance(26, f"res:{idx}", 3)
        for pqrs in ((1, 2, 1, 1), (3, 1, 3, 1)):
            assert verify_identity(pqrs, a, L).is_zero(), pqrs


def test_residuals_all_catalogued_small_dimensions():
    for dim in (2, 4):
        L, a = make_instance(27, f"resN:{dim}", dim)
        ws = IdentityWorkspace(a, L)
        for ic in identity_catalogue():
            assert ws.residual(ic).is_zero(), (dim, ic.tag)


def test_symmetric_connection_residuals_trivial():
    rng = derive_rng(28, "symres")
    L = random_symmetric_connection(rng, 2, degree=1)
    a = random_tensor_field(rng, 2, (1, 1), degree=1)
    for pqrs in CATALOGUE_BY_PQRS:
        assert verify_identity(pqrs, a, L).is_zero()


def test_verify_identity_rejects_uncatalogued():
    L, a = make_instance(29, "rej", 2)
    with pytest.raises(ValueError):
        verify_identity((2, 3, 3, 2), a, L)


# ---------------------------------------------------------------------------
# coefficient solving
# ---------------------------------------------------------------------------


def test_solver_reproduces_catalogue_entries():
    for pqrs in ((1, 1, 1, 1), (1, 3, 1, 2), (2, 3, 2, 3)):
        sol = solve_identity_coefficients(pqrs, dims=(3,), verify_dims=(3,))
        assert sol.c == CATALOGUE_BY_PQRS[pqrs].c, pqrs


def test_solver_handles_uncatalogued_combination():
    sol = solve_identity_coefficients((2, 3, 3, 2), dims=(3,), verify_dims=(3,))
    assert all(v in (-1, 0, 1) for v in sol.c)
    # verify on an independent instance
    L, a = make_instance(30, "fresh", 3)
    ws = IdentityWorkspace(a, L)
    assert ws.lhs((2, 3, 3, 2)) == ws.rhs(sol)


def test_solver_swap_pairing():
    # solving the reversed combination negates the identity under an m,n swap
    a_sol = solve_identity_coefficients((1, 2, 3, 3), dims=(3,), verify_dims=(3,))
    b_sol = solve_identity_coefficients((3, 3, 1, 2), dims=(3,), verify_dims=(3,))
    L, a = make_instance(31, "pair", 3)
    ws = IdentityWorkspace(a, L)
    left = ws.rhs(a_sol).swap_last_lower()
    assert left == -ws.rhs(b_sol)


def test_solver_rejects_bad_combination():
    with pytest.raises(ValueError):
        solve_identity_coefficients((0, 1, 1, 1))


# ---------------------------------------------------------------------------
# mixed-rule family
# ---------------------------------------------------------------------------


def test_mix_weights_validation():
    with pytest.raises(ValueError):
        MixWeights(((1, 1, 0),) * 5)
    assert MixWeights.pure(2).rows[0] == (0, 1, 0)
    third = Fraction(1, 3)
    assert MixWeights.uniform().rows[4] == (third, third, third)


def test_mixed_family_pure_rows_reduce_to_single_rule():
    L, a = make_instance(32, "mix1", 3)
    for l in (1, 2, 3):
        weights = MixWeights.pure(l)
        for pqrs in ((1, 1, 1, 1), (3, 1, 3, 1)):
            assert verify_mixed_family(pqrs, weights, a, L).is_zero(), (l, pqrs)


def test_mixed_family_uniform_and_random_weights():
    L, a = make_instance(33, "mix2", 3)
    rng = derive_rng(33, "mixw")
    for pqrs in ((1, 2, 1, 1), (2, 2, 2, 2)):
        assert verify_mixed_family(pqrs, MixWeights.uniform(), a, L).is_zero()
        for _ in range(2):
            w = MixWeights.random(rng)
            assert verify_mixed_family(pqrs, w, a, L).is_zero(), pqrs


def test_mixed_family_torsion_free():
    rng = derive_rng(34, "mixtf")
    L = random_symmetric_connection(rng, 2, degree=1)
    a = random_tensor_field(rng, 2, (1, 1), degree=1)
    w = MixWeights.random(derive_rng(34, "w"))
    assert verify_mixed_family((1, 1, 1, 1), w, a, L).is_zero()


def test_mixed_family_rejects_uncatalogued():
    L, a = make_instance(35, "mixrej", 2)
    with pytest.raises(ValueError):
        verify_mixed_family((2, 3, 3, 2), MixWeights.uniform(), a, L)


# ---------------------------------------------------------------------------
# expanded (partial-derivative) form
# ---------------------------------------------------------------------------


def test_expanded_form_matches_covariant_form():
    L, a = make_instance(36, "exp", 3)
    for pqrs in ((1, 1, 1, 1), (2, 1, 1, 1), (1, 3, 1, 3)):
        assert verify_expanded_identity(pqrs, a, L).is_zero(), pqrs


def test_expanded_form_constant_fields():
    # constant tensor and connection: every partial vanishes and the check
    # compares the quadratic brackets alone
    L, a = make_instance(37, "expc", 3, degree=0)
    assert a.partial_gradient().is_zero()
    for pqrs in ((1, 1, 1, 1), (3, 3, 3, 3)):
        assert verify_expanded_identity(pqrs, a, L).is_zero()


def test_expanded_form_torsion_free():
    rng = derive_rng(38, "exptf")
    L = random_symmetric_connection(rng, 2, degree=1)
    a = random_tensor_field(rng, 2, (1, 1), degree=1)
    ws = IdentityWorkspace(a, L)
    ic = CATALOGUE_BY_PQRS[(1, 1, 1, 1)]
    assert ws.rhs_expanded(ic) == ws.r_commutator()
