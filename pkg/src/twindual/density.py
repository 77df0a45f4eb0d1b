"""Density machinery: rotation blocks of adjacent reflection products,
Chebyshev finite-order analysis, and the bracket-generated Lie elements
whose independence certifies density of the reflection group image.

The product of adjacent reflections S_i S_(i+1) is a rotation; its active
3x3 block R has a Rodrigues form R = I + z N + (1 - c) N^2, where N is the
antisymmetric cross-product matrix of the (normalized) axis, and

    z = 2 sqrt(q [3]_q) / [2]_q^2,    c = -[2]_(q^2) / [2]_q^2,

with z^2 + c^2 = 1 as a rational identity in q.  Powers follow Chebyshev
polynomials: S^k = I + z U_(k-1)(c) N + (1 - T_k(c)) N^2, so S has finite
order k exactly when U_(k-1)(c) = 0 and T_k(c) = 1.

Exact mode note: N itself needs 1/sqrt([3]_q), which is usually irrational,
so exact computations carry M = sqrt([3]_q) N (entries polynomial in the
declared sqrt of q) and push the scalar into each identity:
N^3 = -N becomes M^3 = -[3]_q M, and z N = (2 sqrt(q) / [2]_q^2) M.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hecke import BASIS_E_PRIME, RepContext, determinant, reflection_generator, \
    orthonormal_reflection_block
from .linalg import Matrix, commutator, span_dimension
from .reporting import CheckReport
from .scalars import DomainError, scalar_is_zero


def _axis_index_check(i: int, rc: RepContext):
    if not 1 <= i <= rc.n - 2:
        raise DomainError(f"rotation index {i} out of range 1..{rc.n - 2}")


def scaled_rotation_axis_block(i: int, rc: RepContext) -> Matrix:
    """sqrt([3]_q) times the rotation-axis matrix of S_i S_(i+1): the
    antisymmetric block [[0, -q, s], [q, 0, -1], [-s, 1, 0]] embedded at
    rows/columns i, i+1, i+2 of an n x n zero matrix (e'-basis).  Exact in
    exact mode; satisfies M^3 = -[3]_q M."""
    _axis_index_check(i, rc)

    def build():
        n = rc.n
        q, s = rc.q, rc.s
        zero = rc.qc.zero()
        one = rc.one()
        data = [[zero] * n for _ in range(n)]
        o = i - 1
        block = [
            [zero, -q, s],
            [q, zero, -one],
            [-s, one, zero],
        ]
        for a in range(3):
            for b in range(3):
                data[o + a][o + b] = block[a][b]
        return Matrix.exact(data, BASIS_E_PRIME) if rc.mode == "exact" else Matrix.approx(data, BASIS_E_PRIME)

    return rc.cached(("axis-scaled", i), build)


def rotation_axis_block(i: int, rc: RepContext) -> Matrix:
    """The normalized rotation-axis matrix N_i (always approx: the
    normalization 1/sqrt([3]_q) is generally irrational).  N^3 = -N."""
    _axis_index_check(i, rc)
    three = complex(rc.q_int(3))
    if abs(three) <= rc.tol:
        raise DomainError("[3]_q = 0: the rotation axis cannot be normalized")
    return scaled_rotation_axis_block(i, rc).to_approx().scale(1 / cmath.sqrt(three))


def adjacent_reflection_product(i: int, rc: RepContext) -> Matrix:
    """S_i S_(i+1) in the e'-basis."""
    _axis_index_check(i, rc)
    return reflection_generator(i, rc) @ reflection_generator(i + 1, rc)


def rotation_block_check(i: int, rc: RepContext) -> CheckReport:
    """The middle 3x3 block of S_i S_(i+1) equals
    [[a, ab, b^2], [b, -a^2, -ab], [0, b, -a]] with a = (1-q)/(1+q),
    b = 2 s/(1+q); the product has determinant 1."""
    _axis_index_check(i, rc)
    report = CheckReport(f"rotation-block i={i} n={rc.n}")
    q, s = rc.q, rc.s
    one = rc.one()
    a = (one - q) / (one + q)
    b = 2 * s / (one + q)
    block = [
        [a, a * b, b * b],
        [b, -a * a, -a * b],
        [rc.qc.zero(), b, -a],
    ]
    prod = adjacent_reflection_product(i, rc)
    o = i - 1
    if rc.mode == "exact":
        sub = Matrix.exact([row[o:o + 3] for row in prod.data[o:o + 3]])
        expected = Matrix.exact(block)
    else:
        sub = Matrix.approx(prod.data[o:o + 3, o:o + 3])
        expected = Matrix.approx(block)
    report.add("middle 3x3 block has the displayed rotation form", sub.equals(expected, rc.tol))
    report.add("det(S_i S_(i+1)) = 1", scalar_is_zero(determinant(prod) - one, rc.tol))
    return report


def rotation_cosine(rc: RepContext):
    """c = cos(alpha) = -[2]_(q^2) / [2]_q^2 = -(1+q^2)/(1+q)^2."""
    one = rc.one()
    return -(one + rc.q * rc.q) / ((one + rc.q) ** 2)


def rotation_sine_squared(rc: RepContext):
    """z^2 = 4 q [3]_q / [2]_q^4; z^2 + c^2 = 1 identically in q."""
    return 4 * rc.q * rc.q_int(3) / (rc.q_int(2) ** 4)


def rodrigues_check(i: int, rc: RepContext) -> CheckReport:
    """S_i S_(i+1) = I + z N + (1-c) N^2 with the stated z, c, and
    z^2 + c^2 = 1.  Exact mode verifies the scaled version
    S = I + (2s/[2]_q^2) M + ((1-c)/[3]_q) M^2."""
    _axis_index_check(i, rc)
    if scalar_is_zero(rc.q_int(3), rc.tol):
        raise DomainError("[3]_q = 0: the Rodrigues normalization fails")
    report = CheckReport(f"rodrigues i={i} n={rc.n}")
    one = rc.one()
    c = rotation_cosine(rc)
    z2 = rotation_sine_squared(rc)
    report.add("z^2 + c^2 = 1", scalar_is_zero(z2 + c * c - one, rc.tol))

    prod = adjacent_reflection_product(i, rc)
    ident = Matrix.identity(rc.n, rc.mode)
    m = scaled_rotation_axis_block(i, rc)
    three = rc.q_int(3)
    rhs = ident + m.scale(2 * rc.s / (rc.q_int(2) ** 2)) + (m @ m).scale((one - c) / three)
    report.add("rotation formula reproduces S_i S_(i+1)", prod.equals(rhs, rc.tol))

    n_mat = rotation_axis_block(i, rc)
    report.add("N^T = -N", n_mat.transpose().equals(-n_mat, max(rc.tol, 1e-9)))
    cube = n_mat @ n_mat @ n_mat
    report.add("N^3 = -N", cube.equals(-n_mat, max(rc.tol, 1e-9)))
    m3 = m @ m @ m
    report.add("M^3 = -[3]_q M (scaled, exactly)", m3.equals(m.scale(-three), rc.tol))
    return report


def chebyshev_coefficients(kind: str, k: int) -> list[int]:
    """Coefficients (ascending) of the Chebyshev polynomial T_k or U_k from
    the recurrence P_(k+1) = 2x P_k - P_(k-1)."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    if kind not in ("first", "second"):
        raise DomainError("kind must be 'first' or 'second'")
    prev = [1]
    curr = [0, 1] if kind == "first" else [0, 2]
    if k == 0:
        return prev
    for _ in range(k - 1):
        nxt = [0] + [2 * c for c in curr]
        for idx, c in enumerate(prev):
            nxt[idx] -= c
        prev, curr = curr, nxt
    return curr


def chebyshev_value(kind: str, k: int, x):
    """Evaluate T_k or U_k at x (Fraction or complex) by the recurrence."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    one = Fraction(1) if isinstance(x, (Fraction, int)) else 1 + 0j
    prev = one
    curr = x if kind == "first" else 2 * x
    if kind not in ("first", "second"):
        raise DomainError("kind must be 'first' or 'second'")
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, curr = curr, 2 * x * curr - prev
    return curr


def power_formula_check(i: int, k: int, rc: RepContext) -> CheckReport:
    """(S_i S_(i+1))^k = I + z U_(k-1)(c) N + (1 - T_k(c)) N^2."""
    _axis_index_check(i, rc)
    if k < 1:
        raise DomainError("k must be at least 1")
    if scalar_is_zero(rc.q_int(3), rc.tol):
        raise DomainError("[3]_q = 0")
    report = CheckReport(f"power-formula i={i} k={k}")
    c = rotation_cosine(rc)
    u_val = chebyshev_value("second", k - 1, c)
    t_val = chebyshev_value("first", k, c)
    one = rc.one()
    m = scaled_rotation_axis_block(i, rc)
    ident = Matrix.identity(rc.n, rc.mode)
    rhs = ident + m.scale(2 * rc.s * u_val / (rc.q_int(2) ** 2)) + (m @ m).scale((one - t_val) / rc.q_int(3))
    lhs = adjacent_reflection_product(i, rc).pow(k)
    tol = rc.tol * max(1.0, float(k))
    report.add(f"Chebyshev closed form matches the direct power k={k}", lhs.equals(rhs, tol))
    return report


@dataclass(frozen=True)
class FiniteOrderReport:
    """Order search result: ``order`` is the smallest k with S^k = 1 (None
    if no order up to k_max); ``chebyshev_order`` the smallest k passing the
    U/T criterion; ``agree`` whether the two verdicts coincide."""

    k_max: int
    order: int | None
    chebyshev_order: int | None
    exactly_confirmed: bool = False

    @property
    def agree(self) -> bool:
        return self.order == self.chebyshev_order

    @property
    def finite(self) -> bool:
        return self.order is not None

    def to_json(self) -> dict:
        return {
            "k_max": self.k_max,
            "order": self.order,
            "chebyshev_order": self.chebyshev_order,
            "agree": self.agree,
            "verdict": f"finite({self.order})" if self.finite else f"no-order-up-to({self.k_max})",
            "exactly_confirmed": self.exactly_confirmed,
        }


def matrix_order(mat: Matrix, k_max: int, tol: float = 1e-7) -> int | None:
    """Smallest k <= k_max with mat^k = 1 by iterated floating products."""
    arr = mat.to_ndarray()
    ident = np.eye(arr.shape[0], dtype=arr.dtype)
    acc = arr.copy()
    for k in range(1, k_max + 1):
        if np.max(np.abs(acc - ident)) <= tol:
            return k
        acc = acc @ arr
    return None


def _chebyshev_order_scan(c: complex, k_max: int, tol: float = 1e-7) -> int | None:
    """Smallest k <= k_max with U_(k-1)(c) = 0 and T_k(c) = 1, scanned by the
    value recurrence; aborts once the values blow up (no later k can pass)."""
    t_prev, t_curr = 1 + 0j, c            # T_0, T_1
    u_prev, u_curr = 0j, 1 + 0j           # U_(-1), U_0
    for k in range(1, k_max + 1):
        if abs(u_curr) <= tol and abs(t_curr - 1) <= tol:
            return k
        if max(abs(t_curr), abs(u_curr)) > 1e9:
            return None
        t_prev, t_curr = t_curr, 2 * c * t_curr - t_prev
        u_prev, u_curr = u_curr, 2 * c * u_curr - u_prev
    return None


def finite_order_detect(i: int, rc: RepContext, k_max: int = 2000) -> FiniteOrderReport:
    """Find the order of S_i S_(i+1) up to k_max, cross-checked against the
    Chebyshev criterion; candidate orders <= 64 are confirmed exactly when
    the context is exact."""
    _axis_index_check(i, rc)
    prod = adjacent_reflection_product(i, rc)
    order = matrix_order(prod.to_approx(), k_max)
    c = complex(rotation_cosine(rc))
    cheb = _chebyshev_order_scan(c, k_max)
    confirmed = False
    if order is not None and rc.mode == "exact" and order <= 64:
        confirmed = prod.pow(order).is_identity()
        if not confirmed:
            order = None
    return FiniteOrderReport(k_max=k_max, order=order, chebyshev_order=cheb, exactly_confirmed=confirmed)


# -- Lie elements ------------------------------------------------------------


@dataclass(frozen=True)
class LieElement:
    """Bracket-generated element of the orthogonal Lie algebra, indexed by
    1 <= r < s <= n-1."""

    r: int
    s: int
    matrix: Matrix


def _matrix_unit_diff(rc: RepContext, a: int, b: int) -> Matrix:
    """The antisymmetric matrix unit e_(a,b) - e_(b,a) (1-indexed, n x n)."""
    zero = rc.qc.zero()
    one = rc.one()
    data = [[zero] * rc.n for _ in range(rc.n)]
    data[a - 1][b - 1] = one
    data[b - 1][a - 1] = -one
    return Matrix.exact(data) if rc.mode == "exact" else Matrix.approx(data)


def lie_bracket_element(r: int, s: int, rc: RepContext, method: str = "recursive") -> LieElement:
    """L_(r, r+1) = sqrt([3]_q) N_r, and L_(r, s+1) = [L_(r,s), L_(s,s+1)].

    ``closed_form`` evaluates the explicit formula (t = s - r):
    (-1)^t ( q^(3/2) [t-1] E(r,s-1) + q^t E(r,s) - q^(1/2) [t] E(r,s+1)
             - sum_(i=1..t-2) q^((i+1)/2) E(r+i, s-1)
             + sum_(j=1..t) q^((j-1)/2) E(r+j, s+1) )
    with E(a,b) = e_(a,b) - e_(b,a); both methods agree.  (The leading
    exponent 3/2 was fitted symbolically from the recursion; it is the only
    q-power consistent with the bracket for every t.)
    """
    if not 1 <= r < s <= rc.n - 1:
        raise DomainError(f"need 1 <= r < s <= {rc.n - 1}")
    if method == "recursive":
        def build():
            if s == r + 1:
                return scaled_rotation_axis_block(r, rc)
            left = lie_bracket_element(r, s - 1, rc, "recursive").matrix
            right = lie_bracket_element(s - 1, s, rc, "recursive").matrix
            return commutator(left, right)

        return LieElement(r, s, rc.cached(("lie", r, s), build))
    if method != "closed_form":
        raise DomainError("method must be 'recursive' or 'closed_form'")

    t = s - r
    sq = rc.s
    q = rc.q
    acc = Matrix.zero(rc.n, rc.n, rc.mode)
    if t - 1 > 0:
        acc = acc + _matrix_unit_diff(rc, r, s - 1).scale(sq ** 3 * rc.q_int(t - 1))
    acc = acc + _matrix_unit_diff(rc, r, s).scale(q ** t)
    acc = acc - _matrix_unit_diff(rc, r, s + 1).scale(sq * rc.q_int(t))
    for i in range(1, t - 1):
        acc = acc - _matrix_unit_diff(rc, r + i, s - 1).scale(sq ** (i + 1))
    for j in range(1, t + 1):
        acc = acc + _matrix_unit_diff(rc, r + j, s + 1).scale(sq ** (j - 1))
    if t % 2 == 1:
        acc = -acc
    return LieElement(r, s, acc)


def lie_family(rc: RepContext, method: str = "recursive") -> list[LieElement]:
    return [
        lie_bracket_element(r, s, rc, method)
        for r in range(1, rc.n - 1)
        for s in range(r + 1, rc.n)
    ]


@dataclass(frozen=True)
class IndependenceReport:
    n: int
    dimension: int
    expected: int
    hypothesis_ok: bool  # [n-2]_q! != 0

    @property
    def independent(self) -> bool:
        return self.dimension == self.expected

    @property
    def dependence_found(self) -> bool:
        return self.dimension < self.expected

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dimension": self.dimension,
            "expected": self.expected,
            "independent": self.independent,
            "dependence_found": self.dependence_found,
            "hypothesis_ok": self.hypothesis_ok,
        }


def independence_test(rc: RepContext) -> IndependenceReport:
    """Span dimension of all L_(r,s) against the expected count
    (n-1 choose 2); a rank drop witnesses a dependence (which is expected
    exactly when some [j]_q = 0 for j <= n-2)."""
    family = lie_family(rc)
    dim = span_dimension([el.matrix for el in family], rc.tol)
    expected = math.comb(rc.n - 1, 2)
    hypothesis = not scalar_is_zero(rc.q_factorial(rc.n - 2), rc.tol)
    return IndependenceReport(rc.n, dim, expected, hypothesis)


def sign_flip_matrix(i: int, size: int) -> Matrix:
    """diag(1, ..., -1, ..., 1) with the -1 in position i (1-indexed)."""
    arr = np.eye(size)
    arr[i - 1, i - 1] = -1.0
    return Matrix.approx(arr)


@dataclass(frozen=True)
class AltDensityReport:
    n: int
    hypothesis_ok: bool       # [n]_q! != 0
    orders: tuple             # entries: int or None per i = 1..n-2
    k_max: int

    @property
    def all_infinite(self) -> bool:
        return all(o is None for o in self.orders)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "hypothesis_ok": self.hypothesis_ok,
            "orders": [o if o is not None else f"no-order-up-to({self.k_max})" for o in self.orders],
            "all_infinite_up_to_k_max": self.all_infinite,
            "k_max": self.k_max,
        }


def alt_density_check(rc: RepContext, k_max: int = 2000) -> AltDensityReport:
    """The alternative density route on F: for i = 1..n-2 form the product
    of the sign flip D_i with the reflection block of S_(i+1) on the
    orthonormal basis (a rotation in coordinates i, i+1) and search its
    order; density follows when every one has infinite order."""
    rc.require_full_factorial()
    hypothesis = not scalar_is_zero(rc.q_factorial(rc.n), rc.tol)
    orders = []
    for i in range(1, rc.n - 1):
        d = sign_flip_matrix(i, rc.n - 1)
        rot = d @ orthonormal_reflection_block(i + 1, rc)
        orders.append(matrix_order(rot, k_max))
    return AltDensityReport(rc.n, hypothesis, tuple(orders), k_max)
