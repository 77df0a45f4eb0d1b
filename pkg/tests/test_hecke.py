from fractions import Fraction

import pytest

from twindual.hecke import (
    BASIS_E,
    BASIS_E_PRIME,
    RepContext,
    appendix_check,
    bilinear,
    braid_deviation,
    braid_deviation_check,
    burau_generator,
    check_twin_relations,
    determinant,
    eigenvector_check,
    fixed_vector,
    form_matrix,
    gram_schmidt_u_basis,
    hecke_braid_check,
    hecke_quadratic_check,
    line_projection_matrix,
    orthogonality_check,
    orthonormal_action_check,
    orthonormal_reflection_block,
    orthogonal_reduced_basis,
    projection_check,
    reduced_gram_matrix,
    reflection_coefficient_a,
    reflection_coefficient_b_squared,
    reflection_formula_check,
    reflection_generator,
    reflection_in_orthonormal_basis,
    simple_root_vector,
)
from twindual.linalg import Matrix
from twindual.scalars import DomainError, q_int


def rc4():
    return RepContext.exact(4, 2)  # q = 4


def test_burau_block_at_q1():
    rc = RepContext.exact(2, 1)
    t = burau_generator(1, rc)
    assert t.equals(Matrix.exact([[0, 1], [1, 0]]))


def test_hecke_quadratic_and_braid():
    for n, s in [(3, 2), (4, 2), (5, 3), (4, Fraction(1, 2))]:
        rc = RepContext.exact(n, s)
        assert hecke_quadratic_check(rc).ok
        assert hecke_braid_check(rc).ok


def test_eigenvectors():
    rc = rc4()
    for i in range(1, 4):
        assert eigenvector_check(i, rc).ok


def test_reflection_block_q1_is_permutation():
    rc = RepContext.exact(3, 1)
    s = reflection_generator(1, rc)
    assert s.equals(Matrix.exact([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))


def test_twin_relations_exact_and_approx():
    assert check_twin_relations(rc4()).ok
    assert check_twin_relations(RepContext.exact(5, 1)).ok
    rc = RepContext.approx(4, 2 + 1j)
    assert check_twin_relations(rc).ok


def test_orthogonality():
    for n, s in [(3, 2), (4, 2), (6, 3)]:
        assert orthogonality_check(RepContext.exact(n, s)).ok


def test_form_matrix_values():
    rc = RepContext.exact(3, 2)  # q = 4
    j = form_matrix(rc, BASIS_E)
    assert j[(0, 0)] == 1 and j[(1, 1)] == 4 and j[(2, 2)] == 16
    assert form_matrix(rc, BASIS_E_PRIME).is_identity()
    # q = 2 has no rational square root, so the e-basis diagonal with entries
    # 1, 2, 4 only exists in approx mode
    rc2 = RepContext.approx(3, 2.0)
    j2 = form_matrix(rc2, BASIS_E)
    assert abs(j2[(1, 1)] - 2) < 1e-12 and abs(j2[(2, 2)] - 4) < 1e-12


def test_root_vector_norm():
    rc = rc4()
    for i in range(1, 4):
        f = simple_root_vector(i, rc)
        assert bilinear(rc, f, f) == 1 + rc.q


def test_braid_deviation_identity():
    rc = RepContext.exact(3, 2)
    dev = braid_deviation(1, rc)
    coeff = Fraction(-9, 25)  # -(1-4)^2/(1+4)^2
    expected = (reflection_generator(1, rc) - reflection_generator(2, rc)).scale(coeff)
    assert dev.equals(expected)

    rc9 = RepContext.exact(4, 3)  # q = 9
    dev = braid_deviation(2, rc9)
    coeff = Fraction(-(1 - 9) ** 2, (1 + 9) ** 2)
    expected = (reflection_generator(2, rc9) - reflection_generator(3, rc9)).scale(coeff)
    assert dev.equals(expected)
    assert braid_deviation_check(rc9).ok


def test_braid_deviation_vanishes_at_q1():
    rc = RepContext.exact(4, 1)
    for i in (1, 2):
        assert braid_deviation(i, rc).is_zero()


def test_projection_small_case():
    rc = RepContext.exact(2, 1)
    p = line_projection_matrix(rc)
    assert p.equals(Matrix.exact([[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)]]))


def test_projection_properties():
    for n, s in [(3, 2), (4, 2), (5, 1)]:
        assert projection_check(RepContext.exact(n, s)).ok


def test_projection_requires_splitting():
    # q = primitive cube root of unity makes [3]_q = 0
    import cmath

    rc = RepContext.approx(3, cmath.exp(2j * cmath.pi / 3))
    with pytest.raises(DomainError):
        line_projection_matrix(rc)


def test_reduced_gram_matrix_and_determinant():
    for n in (3, 4, 5, 6):
        rc = RepContext.exact(n, 2)
        gram = reduced_gram_matrix(rc)
        assert determinant(gram) == q_int(n, Fraction(4))
        assert gram.equals(gram.transpose())
    rc1 = RepContext.exact(3, 1)
    gram = reduced_gram_matrix(rc1)
    assert gram.equals(Matrix.exact([[2, -1], [-1, 2]]))
    assert determinant(gram) == 3


def test_orthogonal_reduced_basis_q1():
    rc = RepContext.exact(3, 1)
    vecs = orthogonal_reduced_basis(rc)
    assert vecs[0].equals(simple_root_vector(1, rc))
    expected = simple_root_vector(2, rc).scale(2) + simple_root_vector(1, rc)
    assert vecs[1].equals(expected)
    assert bilinear(rc, vecs[1], vecs[1]) == 6  # [2]_1 [3]_1


def test_gram_schmidt_report():
    for n, s in [(3, 2), (4, 2), (5, 2), (4, Fraction(1, 2))]:
        result = gram_schmidt_u_basis(RepContext.exact(n, s))
        assert result.report.ok
        assert len(result.vectors) == n - 1


def test_gram_schmidt_specific_inner_products():
    rc = rc4()
    vecs = orthogonal_reduced_basis(rc)
    for i in (2, 3):
        val = bilinear(rc, simple_root_vector(i, rc), vecs[i - 2])
        assert val == -rc.s * rc.q_int(i - 1)


def test_reflection_coefficients():
    rc = RepContext.exact(5, 2)
    one = Fraction(1)
    for i in range(1, 5):
        a = reflection_coefficient_a(i, rc)
        b2 = reflection_coefficient_b_squared(i, rc)
        assert a * a + b2 == one
        # alternative expression a_i = [i]_{q^2} / [i]_q^2
        assert a == q_int(i, rc.q * rc.q) / (rc.q_int(i) ** 2)


def test_reflection_coefficients_q1():
    rc = RepContext.exact(4, 1)
    assert reflection_coefficient_a(2, rc) == Fraction(1, 2)
    assert reflection_coefficient_b_squared(2, rc) == Fraction(3, 4)


def test_orthonormal_action():
    for n, s in [(4, 2), (5, 2), (4, 3), (5, Fraction(1, 2))]:
        assert orthonormal_action_check(RepContext.exact(n, s)).ok


def test_orthonormal_block_matches_conjugation():
    rc = rc4()
    for i in range(1, 4):
        block = orthonormal_reflection_block(i, rc)
        conj = reflection_in_orthonormal_basis(i, rc)
        sub = Matrix.approx(conj.to_ndarray()[1:, 1:])
        assert block.equals(sub, 1e-9)


def test_reflection_formula():
    rc = rc4()
    for i in range(1, 4):
        assert reflection_formula_check(i, rc).ok


def test_reflection_fixes_the_fixed_vector():
    rc = rc4()
    ell = fixed_vector(rc)
    for i in range(1, 4):
        assert (reflection_generator(i, rc) @ ell).equals(ell)


def test_appendix_sweep():
    for n in (3, 4):
        for s in (2, 3, Fraction(1, 2)):
            assert appendix_check(RepContext.exact(n, s)).ok


def test_split_basis_reflection_is_block_diagonal():
    # the split basis separates the fixed line from F exactly, so the
    # conjugated reflection must be exactly diag(1, action on F)
    from twindual.hecke import reflection_in_split_basis

    rc = RepContext.exact(5, 2)
    for i in range(1, 5):
        m = reflection_in_split_basis(i, rc)
        assert m[(0, 0)] == 1
        for j in range(1, 5):
            assert m[(0, j)] == 0 and m[(j, 0)] == 0
        assert (m @ m).is_identity()


def test_failed_checks_carry_witnesses():
    from twindual.hecke import _check_equal, _check_zero
    from twindual.reporting import CheckReport

    report = CheckReport("witness plumbing")
    _check_equal(report, "forced mismatch", Matrix.identity(2), Matrix.identity(2).scale(2), 1e-9)
    _check_zero(report, "forced nonzero", Matrix.identity(2), 1e-9)
    assert not report.ok
    for item in report.items:
        assert not item.passed and item.detail  # the residual is attached


def test_gram_schmidt_error_names_failing_k():
    import cmath

    rc = RepContext.approx(4, cmath.exp(2j * cmath.pi / 3))  # [3]_q = 0
    with pytest.raises(DomainError, match=r"\[3\]_q = 0"):
        orthogonal_reduced_basis(rc)


def test_two_parameter_front_door():
    rc = RepContext.from_hecke_parameters(4, Fraction(1), Fraction(-4), sqrt_q=2)
    assert rc.q == 4
    rc2 = RepContext.from_hecke_parameters(4, 2.0, -8.0)
    assert abs(complex(rc2.q) - 4) < 1e-12
    with pytest.raises(DomainError):
        RepContext.from_hecke_parameters(4, Fraction(0), Fraction(1), sqrt_q=1)
