import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twindual.linalg import (
    Matrix,
    SpanTracker,
    commutator,
    inverse,
    kron,
    kron_power,
    mat_mul,
    nullspace,
    rank,
    span_dimension,
    stack_rows,
)


def frac_matrix(rng, rows, cols, span=6):
    return Matrix.exact(
        [[Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(cols)] for _ in range(rows)]
    )


def test_matmul_identity():
    rng = random.Random(0)
    a = frac_matrix(rng, 3, 3)
    assert mat_mul(Matrix.identity(3), a).equals(a)
    assert mat_mul(a, Matrix.identity(3)).equals(a)


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError):
        mat_mul(Matrix.zero(2, 3), Matrix.zero(2, 3))


def test_kron_identity_sizes():
    assert kron(Matrix.identity(2), Matrix.identity(3)).equals(Matrix.identity(6))
    a = Matrix.exact([[1, 2], [3, 4]])
    assert kron(a, a).shape == (4, 4)


def test_kron_mixed_product():
    rng = random.Random(1)
    a, b = frac_matrix(rng, 2, 3), frac_matrix(rng, 2, 2)
    c, d = frac_matrix(rng, 3, 2), frac_matrix(rng, 2, 3)
    lhs = mat_mul(kron(a, b), kron(c, d))
    rhs = kron(mat_mul(a, c), mat_mul(b, d))
    assert lhs.equals(rhs)


def test_kron_realizes_diagonal_action():
    rng = random.Random(2)
    g = frac_matrix(rng, 3, 3)
    u = frac_matrix(rng, 3, 1)
    v = frac_matrix(rng, 3, 1)
    tensor = kron(u, v)
    assert mat_mul(kron(g, g), tensor).equals(kron(mat_mul(g, u), mat_mul(g, v)))


def test_commutator_examples():
    a = Matrix.exact([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])   # e12 - e21
    b = Matrix.exact([[0, 0, 0], [0, 0, 1], [0, -1, 0]])   # e23 - e32
    expected = Matrix.exact([[0, 0, 1], [0, 0, 0], [-1, 0, 0]])  # e13 - e31
    assert commutator(a, b).equals(expected)
    assert commutator(a, a).is_zero()
    assert commutator(Matrix.identity(3), b).is_zero()


def test_nullspace_examples():
    dim, basis = nullspace(Matrix.zero(4, 4))
    assert dim == 4 and len(basis) == 4
    dim, basis = nullspace(Matrix.exact([[2, 1], [1, 1]]))
    assert dim == 0 and basis == []
    dim, basis = nullspace(Matrix.exact([[1, -1]]))
    assert dim == 1
    v = basis[0]
    assert v[(0, 0)] == v[(1, 0)] != 0


def test_nullspace_vectors_are_kernel_vectors():
    rng = random.Random(3)
    a = frac_matrix(rng, 4, 7)
    dim, basis = nullspace(a)
    assert dim + rank(a) == 7
    for v in basis:
        assert mat_mul(a, v).is_zero()


@given(st.integers(min_value=0, max_value=8))
@settings(max_examples=25, deadline=None)
def test_rank_nullity_random(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    a = frac_matrix(rng, rows, cols)
    dim, _ = nullspace(a)
    assert dim + rank(a) == cols


@given(st.integers(min_value=0, max_value=8))
@settings(max_examples=25, deadline=None)
def test_exact_and_approx_rank_agree(seed):
    rng = random.Random(100 + seed)
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    a = frac_matrix(rng, rows, cols, span=4)
    assert rank(a) == rank(a.to_approx())


def test_span_dimension_examples():
    i2 = Matrix.identity(2)
    assert span_dimension([i2, i2.scale(2)]) == 1
    units = [
        Matrix.exact([[1, 0], [0, 0]]),
        Matrix.exact([[0, 1], [0, 0]]),
        Matrix.exact([[0, 0], [1, 0]]),
        Matrix.exact([[0, 0], [0, 1]]),
    ]
    assert span_dimension(units) == 4
    with pytest.raises(ValueError):
        span_dimension([i2, Matrix.identity(3)])


def test_inverse_exact_and_approx():
    rng = random.Random(5)
    while True:
        a = frac_matrix(rng, 4, 4)
        try:
            inv = inverse(a)
            break
        except ValueError:
            continue
    assert mat_mul(a, inv).is_identity()
    approx_inv = inverse(a.to_approx())
    assert mat_mul(a.to_approx(), approx_inv).is_identity(1e-9)


def test_matrix_pow():
    a = Matrix.exact([[1, 1], [0, 1]])
    assert a.pow(0).is_identity()
    assert a.pow(5)[(0, 1)] == 5


def test_span_tracker_matches_batch_rank():
    rng = random.Random(7)
    mats = [frac_matrix(rng, 3, 3) for _ in range(8)]
    tracker = SpanTracker("exact")
    for m in mats:
        tracker.add_matrix(m)
    assert tracker.dimension == span_dimension(mats)
    tracker_a = SpanTracker("approx", 1e-9)
    for m in mats:
        tracker_a.add_matrix(m.to_approx())
    assert tracker_a.dimension == tracker.dimension


def test_approx_nullspace_orthonormal_kernel():
    arr = np.array([[1.0, -1.0, 0.0], [0.0, 0.0, 0.0]])
    dim, basis = nullspace(Matrix.approx(arr))
    assert dim == 2
    for v in basis:
        assert np.allclose(arr @ v.data, 0, atol=1e-12)


def test_stack_rows_shape():
    mats = [Matrix.identity(2), Matrix.zero(2, 2)]
    stacked = stack_rows(mats)
    assert stacked.shape == (2, 4)


def test_kron_power():
    g = Matrix.exact([[0, 1], [1, 0]])
    g3 = kron_power(g, 3)
    assert g3.shape == (8, 8)
    assert mat_mul(g3, g3).is_identity()


def test_matrix_json_roundtrip():
    m = Matrix.exact([[Fraction(-3, 7), 2], [0, Fraction(10) ** 12]], basis="e")
    back = Matrix.from_json(m.to_json())
    assert back.equals(m) and back.basis == "e"
    a = Matrix.approx(np.array([[0.5, -1.25 + 2j]]))
    back = Matrix.from_json(a.to_json())
    assert back.equals(a, 0)


def test_tall_stack_gram_rank_path():
    # rows > 4*cols and cols > 64 routes through the Gram/eigh branch
    rng = np.random.default_rng(0)
    base = rng.standard_normal((70, 70))
    tall = np.vstack([base for _ in range(5)])  # 350 x 70, rank 70
    assert rank(Matrix.approx(tall)) == 70
    deficient = tall.copy()
    deficient[:, -1] = deficient[:, 0]
    dim, basis = nullspace(Matrix.approx(deficient))
    assert dim == 1
    assert np.allclose(deficient @ basis[0].data, 0, atol=1e-8)
