import random
from fractions import Fraction

import numpy as np
import pytest

from twindual.diagrams import PartialDiagram, compose, random_diagram
from twindual.hecke import RepContext, orthonormal_split_basis
from twindual.linalg import Matrix, commutator, inverse
from twindual.scalars import DomainError, QContext
from twindual.tensor_action import (
    SPACE_FULL,
    SPACE_REDUCED,
    TensorContext,
    contraction_operator,
    diagonal_group_action,
    diagram_family,
    diagram_matrix,
    fixed_tensor,
    group_generators,
    place_swap,
    slot_projection,
)


def tc_exact(n=4, r=2, space=SPACE_FULL):
    return TensorContext(RepContext.exact(n, 2), r, space)


def tc_approx(n=4, r=2, space=SPACE_FULL):
    return TensorContext(RepContext(n, QContext.approx_from_exact(2)), r, space)


def test_swap_involution_and_matrix():
    tc = tc_exact()
    s1 = place_swap(1, tc)
    assert (s1 @ s1).is_identity()
    # n = 2, r = 2: the explicit 4x4 swap
    tc2 = TensorContext(RepContext.exact(2, 2), 2)
    swap = place_swap(1, tc2)
    expected = Matrix.exact(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    )
    assert swap.equals(expected)


def test_contraction_properties():
    tc = tc_exact()
    e1 = contraction_operator(1, tc)
    assert (e1 @ e1).equals(e1.scale(4))  # e^2 = n e with n = 4
    s1 = place_swap(1, tc)
    assert (s1 @ e1).equals(e1)
    assert (e1 @ s1).equals(e1)
    assert e1.trace() == 4


def test_slot_projection_properties():
    tc = tc_exact()
    dp = Fraction(7)
    p1 = slot_projection(1, tc, dp)
    assert (p1 @ p1).equals(p1.scale(dp))  # p^2 = delta' p
    bare = slot_projection(1, tc, Fraction(1))
    assert (bare @ bare).equals(bare)


def test_operators_commute_with_group_action():
    for tc in (tc_exact(), tc_approx()):
        gens = group_generators(tc)
        ops = [place_swap(1, tc), contraction_operator(1, tc),
               slot_projection(1, tc, Fraction(3)), slot_projection(2, tc, Fraction(3))]
        for g in gens:
            for op in ops:
                assert commutator(g, op).is_zero(1e-9)


def test_group_action_squares_to_identity():
    tc = tc_exact()
    for g in group_generators(tc):
        assert (g @ g).is_identity()


def test_group_action_fixes_fixed_tensor():
    for tc in (tc_exact(), tc_approx()):
        v = fixed_tensor(tc)
        for g in group_generators(tc):
            assert (g @ v).equals(v, 1e-9)


def test_diagonal_action_r1_is_site_matrix():
    tc = tc_exact(4, 1)
    for i in range(1, 4):
        assert diagonal_group_action(i, tc).equals(tc.site_reflection(i))


def test_generator_diagrams_map_to_operators():
    tc = tc_exact()
    dp = Fraction(5)
    from twindual.diagrams import generator

    assert diagram_matrix(generator("s", 1, 2), tc, dp).equals(place_swap(1, tc))
    assert diagram_matrix(generator("e", 1, 2), tc, dp).equals(contraction_operator(1, tc))
    assert diagram_matrix(generator("p", 1, 2), tc, dp).equals(slot_projection(1, tc, dp))
    assert diagram_matrix(PartialDiagram.identity(2), tc, dp).is_identity()


def test_functor_homomorphism_exact():
    tc = tc_exact()
    dp = Fraction(7)
    rng = random.Random(5)
    n = Fraction(4)
    for _ in range(500):
        d1, d2 = random_diagram(2, rng), random_diagram(2, rng)
        lhs = diagram_matrix(d1, tc, dp) @ diagram_matrix(d2, tc, dp)
        tr = compose(d1, d2)
        rhs = diagram_matrix(tr.result, tc, dp).scale(n ** tr.loops * dp ** tr.non_loops)
        assert lhs.equals(rhs), (d1, d2)


def test_functor_homomorphism_approx_against_algebra_multiply():
    # oracle route: multiply in the diagram algebra at (delta, delta') =
    # (n, dp), then push the resulting linear combination through the functor
    from twindual.diagrams import AlgebraElement, multiply
    from twindual.linalg import Matrix as M

    tc = tc_approx()
    dp = 3.0
    rng = random.Random(6)
    for _ in range(60):
        d1, d2 = random_diagram(2, rng), random_diagram(2, rng)
        lhs = diagram_matrix(d1, tc, dp) @ diagram_matrix(d2, tc, dp)
        product = multiply(
            AlgebraElement.from_diagram(d1), AlgebraElement.from_diagram(d2), 4.0, dp
        )
        rhs = M.zero(tc.dim, tc.dim, "approx")
        for d, coeff in product.terms.items():
            rhs = rhs + diagram_matrix(d, tc, dp).scale(coeff)
        assert lhs.equals(rhs, 1e-9)


def test_all_diagram_images_commute_with_group():
    tc = tc_exact()
    gens = group_generators(tc)
    for d in diagram_family(tc):
        image = diagram_matrix(d, tc, Fraction(7))
        for g in gens:
            assert commutator(g, image).is_zero()


def test_exact_and_approx_images_are_conjugate_invariants():
    # traces agree between the exact split-basis functor and the approx
    # orthonormal one (similarity invariance)
    te, ta = tc_exact(), tc_approx()
    dp = Fraction(3)
    for d in diagram_family(te):
        tr_exact = complex(diagram_matrix(d, te, dp).trace())
        tr_approx = complex(diagram_matrix(d, ta, 3.0).trace())
        assert abs(tr_exact - tr_approx) < 1e-8


def _contraction_from_basis(u_cols: np.ndarray) -> np.ndarray:
    """The two-site contraction operator in e'-coordinates built from the
    given orthonormal columns: theta theta^T with theta = sum_k u_k x u_k.
    (For any basis with U^T U = I the operator sends x (x) y to <x, y> theta.)
    """
    n = u_cols.shape[0]
    theta = np.zeros(n * n, dtype=u_cols.dtype)
    for k in range(u_cols.shape[1]):
        theta += np.kron(u_cols[:, k], u_cols[:, k])
    return np.outer(theta, theta)


def test_contraction_independent_of_orthonormal_basis():
    rc = RepContext(4, QContext.approx_from_exact(2))
    u = orthonormal_split_basis(rc).data
    rng = np.random.default_rng(12)
    gauss = rng.standard_normal((rc.n - 1, rc.n - 1))
    q_rot, _ = np.linalg.qr(gauss)
    rotated = u.copy()
    rotated[:, 1:] = u[:, 1:] @ q_rot  # another orthonormal basis of F
    a_original = _contraction_from_basis(u)
    a_rotated = _contraction_from_basis(rotated)
    assert np.max(np.abs(a_original - a_rotated)) < 1e-9
    # and the operator, conjugated into the u-basis, is the functor's matrix
    tc = TensorContext(rc, 2)
    u2 = Matrix.approx(np.kron(u, u))
    conjugated = inverse(u2) @ Matrix.approx(a_original) @ u2
    assert conjugated.equals(contraction_operator(1, tc), 1e-8)


def test_reduced_space_contraction():
    tc = tc_approx(4, 2, SPACE_REDUCED)
    e1 = contraction_operator(1, tc)
    assert (e1 @ e1).equals(e1.scale(3.0), 1e-9)  # dim F = 3
    assert abs(complex(e1.trace()) - 3) < 1e-9


def test_reduced_space_rejects_partial_diagrams():
    tc = tc_exact(4, 2, SPACE_REDUCED)
    from twindual.diagrams import generator

    with pytest.raises(DomainError):
        diagram_matrix(generator("p", 1, 2), tc, Fraction(1))


def test_index_checks():
    tc = tc_exact()
    with pytest.raises(DomainError):
        place_swap(2, tc)
    with pytest.raises(DomainError):
        slot_projection(3, tc, Fraction(1))
    with pytest.raises(DomainError):
        diagram_matrix(PartialDiagram.identity(3), tc, Fraction(1))
