"""The n-dimensional reflection representation of the twin group.

Everything here is expressed over a fixed deformation parameter q (with a
declared square root s).  The internal convention fixes the two Hecke
parameters to (1, -q); the two-parameter front door normalizes to that,
since all the operators below depend only on q.

Bases in play, each tagged on the matrices it produces:

* ``e``       -- the defining basis; the bilinear form is diag(1, q, ..., q^(n-1)).
* ``e_prime`` -- the rescaled basis e'_i = s^(1-i) e_i, orthonormal for the form.
* ``split``   -- the exact orthogonal (not orthonormal) basis adapted to the
  splitting E = L + F: the fixed vector followed by the Gram-Schmidt vectors
  v'_1, ..., v'_(n-1) of F.  Its Gram matrix is the diagonal
  ([n]_q, [1]_q[2]_q, ..., [n-1]_q[n]_q), all rational.
* ``u``       -- the orthonormal version of ``split`` (floating point; the
  normalizations involve square roots that are rational only by accident).

The generator images are reflections: t_i acts as the reflection fixing the
hyperplane orthogonal to f_i = s e'_i - e'_(i+1), with matrix
diag(I, Q, I), Q = [[1-q, 2s], [2s, q-1]] / (1+q) in the e'-basis.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .linalg import Matrix, commutator, inverse
from .reporting import CheckReport, matrix_witness
from .scalars import DomainError, QContext, q_factorial, q_int, scalar_is_zero


def _check_equal(report: CheckReport, name: str, lhs: Matrix, rhs: Matrix, tol: float):
    """Record a matrix identity, attaching the residual as witness on failure."""
    ok = lhs.equals(rhs, tol)
    report.add(name, ok, "" if ok else matrix_witness(lhs - rhs))


def _check_zero(report: CheckReport, name: str, value: Matrix, tol: float):
    ok = value.is_zero(tol)
    report.add(name, ok, "" if ok else matrix_witness(value))

BASIS_E = "e"
BASIS_E_PRIME = "e_prime"
BASIS_SPLIT = "split"
BASIS_U = "u"


@dataclass
class RepContext:
    """Dimension n, the q context, and a cache of everything built from them."""

    n: int
    qc: QContext
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("n must be at least 2")

    @classmethod
    def exact(cls, n: int, sqrt_q) -> "RepContext":
        return cls(n, QContext.exact(sqrt_q))

    @classmethod
    def approx(cls, n: int, q, sqrt_q=None, tolerance=None) -> "RepContext":
        kwargs = {} if tolerance is None else {"tolerance": tolerance}
        return cls(n, QContext.approx(q, sqrt_q, **kwargs))

    @classmethod
    def from_hecke_parameters(cls, n: int, q1, q2, sqrt_q=None, tolerance=None) -> "RepContext":
        """Normalize a two-parameter (q1, q2) specification to q = -q2/q1."""
        if isinstance(q1, Fraction) and isinstance(q2, Fraction):
            if q1 == 0 or q2 == 0:
                raise DomainError("q1 * q2 must be nonzero")
            q = -q2 / q1
            s = Fraction(sqrt_q) if sqrt_q is not None else None
            if s is None:
                raise DomainError("exact contexts need the rational square root of -q2/q1")
            if s * s != q:
                raise DomainError("sqrt_q**2 != -q2/q1")
            return cls.exact(n, s)
        q = -complex(q2) / complex(q1)
        kwargs = {} if tolerance is None else {"tolerance": tolerance}
        return cls(n, QContext.approx(q, sqrt_q, **kwargs))

    @property
    def mode(self) -> str:
        return self.qc.mode

    @property
    def q(self):
        return self.qc.q

    @property
    def s(self):
        """The declared square root of q."""
        return self.qc.sqrt_q

    @property
    def tol(self) -> float:
        return self.qc.tolerance

    def one(self):
        return self.qc.one()

    def q_int(self, k: int):
        return q_int(k, self.qc.q)

    def q_factorial(self, k: int):
        return q_factorial(k, self.qc.q)

    def require_splitting(self):
        if scalar_is_zero(self.q_int(self.n), self.tol):
            raise DomainError(f"[{self.n}]_q = 0: E does not split as L + F")

    def require_full_factorial(self):
        for k in range(1, self.n + 1):
            if scalar_is_zero(self.q_int(k), self.tol):
                raise DomainError(f"[{k}]_q = 0: the orthogonal basis of F does not exist")

    def cached(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]


def _index_check(i: int, upper: int, what: str):
    if not 1 <= i <= upper:
        raise DomainError(f"{what} index {i} out of range 1..{upper}")


def _block_diag_embed(rc: RepContext, i: int, block, size: int, basis) -> Matrix:
    """diag(I_(i-1), block, I) of total dimension ``size`` with scalar 1 on
    the identity part; exactness follows the context mode."""
    one = rc.one()
    zero = rc.qc.zero()
    b = len(block)
    data = [[zero] * size for _ in range(size)]
    for j in range(size):
        data[j][j] = one
    for a in range(b):
        for c in range(b):
            data[i - 1 + a][i - 1 + c] = block[a][c]
    if rc.mode == "exact":
        return Matrix.exact(data, basis)
    return Matrix.approx(data, basis)


# -- Hecke generators (Burau) ------------------------------------------------


def burau_generator(i: int, rc: RepContext) -> Matrix:
    """Image of the i-th Hecke generator on E in the e-basis.

    With parameters (q1, q2) = (1, -q) this is the block-diagonal matrix
    diag(q1 I, Q, q1 I), Q = [[q1+q2, -q2], [q1, 0]].
    """
    _index_check(i, rc.n - 1, "generator")

    def build():
        q = rc.q
        one = rc.one()
        block = [[one - q, q], [one, rc.qc.zero()]]
        return _block_diag_embed(rc, i, block, rc.n, BASIS_E)

    return rc.cached(("burau", i), build)


def hecke_quadratic_check(rc: RepContext) -> CheckReport:
    """(T_i - q1)(T_i - q2) = 0 for every generator, with (q1, q2) = (1, -q)."""
    report = CheckReport(f"hecke-quadratic n={rc.n}")
    ident = Matrix.identity(rc.n, rc.mode)
    q1, q2 = rc.one(), -rc.q
    for i in range(1, rc.n):
        t = burau_generator(i, rc)
        val = (t - ident.scale(q1)) @ (t - ident.scale(q2))
        _check_zero(report, f"(T_{i}-q1)(T_{i}-q2)=0", val, rc.tol)
    return report


def hecke_braid_check(rc: RepContext) -> CheckReport:
    """Braid and far-commutation relations for the Burau images."""
    report = CheckReport(f"hecke-braid n={rc.n}")
    for i in range(1, rc.n - 1):
        a, b = burau_generator(i, rc), burau_generator(i + 1, rc)
        _check_equal(report, f"T_{i}T_{i+1}T_{i} = T_{i+1}T_{i}T_{i+1}", a @ b @ a, b @ a @ b, rc.tol)
    for i in range(1, rc.n):
        for j in range(i + 2, rc.n):
            a, b = burau_generator(i, rc), burau_generator(j, rc)
            _check_equal(report, f"T_{i}T_{j} = T_{j}T_{i}", a @ b, b @ a, rc.tol)
    return report


def eigenvector_check(i: int, rc: RepContext) -> CheckReport:
    """Kernel checks for the stated eigenvectors of the i-th Burau image:
    (T_i - q1) kills e_j (j != i, i+1) and e_i + e_(i+1); (T_i - q2) kills
    q e_i - e_(i+1); the all-ones vector is a simultaneous eigenvector."""
    _index_check(i, rc.n - 1, "generator")
    report = CheckReport(f"eigenvectors of T_{i}")
    n, q = rc.n, rc.q
    one, zero = rc.one(), rc.qc.zero()
    t = burau_generator(i, rc)
    ident = Matrix.identity(n, rc.mode)
    shift1 = t - ident  # q1 = 1
    shift2 = t - ident.scale(-q)  # q2 = -q

    def col(entries):
        return Matrix.column(entries, rc.mode)

    for j in range(1, n + 1):
        if j in (i, i + 1):
            continue
        v = col([one if k == j else zero for k in range(1, n + 1)])
        report.add(f"(T_{i}-q1) e_{j} = 0", (shift1 @ v).is_zero(rc.tol))
    v_sum = col([one if k in (i, i + 1) else zero for k in range(1, n + 1)])
    report.add(f"(T_{i}-q1)(e_{i}+e_{i+1}) = 0", (shift1 @ v_sum).is_zero(rc.tol))
    v_diff = col([q if k == i else (-one if k == i + 1 else zero) for k in range(1, n + 1)])
    report.add(f"(T_{i}-q2)(q e_{i}-e_{i+1}) = 0", (shift2 @ v_diff).is_zero(rc.tol))
    ones = col([one] * n)
    fixed = (shift1 @ ones).is_zero(rc.tol)
    report.add(f"(T_{i}-q1) applied to the all-ones vector = 0", fixed)
    return report


# -- twin-group generators ---------------------------------------------------


def reflection_generator(i: int, rc: RepContext, basis: str = BASIS_E_PRIME) -> Matrix:
    """Image of the i-th twin generator: (2 T_i - (q1+q2)) / (q1-q2).

    In the e'-basis this is diag(I, Q, I) with the symmetric orthogonal
    block Q = [[1-q, 2s], [2s, q-1]] / (1+q).
    """
    _index_check(i, rc.n - 1, "generator")
    if basis == BASIS_SPLIT:
        return reflection_in_split_basis(i, rc)
    if basis == BASIS_U:
        return reflection_in_orthonormal_basis(i, rc)
    if basis not in (BASIS_E, BASIS_E_PRIME):
        raise DomainError(f"unknown basis {basis!r}")

    def build():
        q, s = rc.q, rc.s
        one = rc.one()
        denom = one + q
        if scalar_is_zero(denom, rc.tol):
            raise DomainError("q = -1: the reflections are undefined")
        a = (one - q) / denom
        if basis == BASIS_E_PRIME:
            b = 2 * s / denom
            block = [[a, b], [b, -a]]
        else:
            block = [[a, 2 * q / denom], [2 * one / denom, -a]]
        return _block_diag_embed(rc, i, block, rc.n, basis)

    return rc.cached(("reflection", i, basis), build)


def form_matrix(rc: RepContext, basis: str = BASIS_E) -> Matrix:
    """Gram matrix of the bilinear form in the requested basis."""
    n = rc.n
    if basis == BASIS_E:
        def build():
            q = rc.q
            one = rc.one()
            zero = rc.qc.zero()
            data = [[zero] * n for _ in range(n)]
            p = one
            for j in range(n):
                data[j][j] = p
                p = p * q
            return Matrix.exact(data, basis) if rc.mode == "exact" else Matrix.approx(data, basis)
        return rc.cached(("form", basis), build)
    if basis in (BASIS_E_PRIME, BASIS_U):
        return Matrix.identity(n, rc.mode).with_basis(basis)
    if basis == BASIS_SPLIT:
        g = split_gram_diagonal(rc)
        zero = rc.qc.zero()
        data = [[zero] * n for _ in range(n)]
        for j in range(n):
            data[j][j] = g[j]
        return Matrix.exact(data, basis) if rc.mode == "exact" else Matrix.approx(data, basis)
    raise DomainError(f"unknown basis {basis!r}")


def fixed_vector(rc: RepContext, basis: str = BASIS_E_PRIME) -> Matrix:
    """The simultaneous fixed vector (the all-ones vector in the e-basis)."""
    one = rc.one()
    if basis == BASIS_E:
        return Matrix.column([one] * rc.n, rc.mode)
    if basis == BASIS_E_PRIME:
        s = rc.s
        entries, p = [], one
        for _ in range(rc.n):
            entries.append(p)
            p = p * s
        return Matrix.column(entries, rc.mode)
    raise DomainError(f"fixed vector not available in basis {basis!r}")


def simple_root_vector(i: int, rc: RepContext) -> Matrix:
    """The vector f_i = s e'_i - e'_(i+1) in e'-coordinates."""
    _index_check(i, rc.n - 1, "root")
    zero = rc.qc.zero()
    entries = [zero] * rc.n
    entries[i - 1] = rc.s
    entries[i] = -rc.one()
    return Matrix.column(entries, rc.mode)


def bilinear(rc: RepContext, v: Matrix, w: Matrix) -> object:
    """The form on e'-coordinate column vectors (the basis is orthonormal,
    so this is the plain, non-conjugated dot product)."""
    total = rc.qc.zero()
    for a, b in zip(v.flatten(), w.flatten()):
        total += a * b
    return total


def check_twin_relations(rc: RepContext, basis: str = BASIS_E_PRIME) -> CheckReport:
    """Involutivity and far commutation of the reflection images."""
    report = CheckReport(f"twin-relations n={rc.n} basis={basis}")
    ident = Matrix.identity(rc.n, rc.mode)
    gens = [reflection_generator(i, rc, basis) for i in range(1, rc.n)]
    for i, g in enumerate(gens, start=1):
        _check_equal(report, f"S_{i}^2 = 1", g @ g, ident, rc.tol)
    for i in range(1, rc.n):
        for j in range(i + 2, rc.n):
            a, b = gens[i - 1], gens[j - 1]
            _check_equal(report, f"S_{i}S_{j} = S_{j}S_{i}", a @ b, b @ a, rc.tol)
    return report


def orthogonality_check(rc: RepContext) -> CheckReport:
    """S^T J S = J in the e-basis and S^T S = 1 in the e'-basis."""
    report = CheckReport(f"orthogonality n={rc.n}")
    j = form_matrix(rc, BASIS_E)
    ident = Matrix.identity(rc.n, rc.mode)
    for i in range(1, rc.n):
        se = reflection_generator(i, rc, BASIS_E)
        _check_equal(report, f"S_{i}^T J S_{i} = J (e-basis)", se.transpose() @ j @ se, j, rc.tol)
        sp = reflection_generator(i, rc, BASIS_E_PRIME)
        _check_equal(report, f"S_{i}^T S_{i} = 1 (e'-basis)", sp.transpose() @ sp, ident, rc.tol)
    return report


def braid_deviation(i: int, rc: RepContext) -> Matrix:
    """S_i S_(i+1) S_i - S_(i+1) S_i S_(i+1); equals
    -((1-q)^2/(1+q)^2) (S_i - S_(i+1)), so it vanishes exactly at q = 1."""
    _index_check(i, rc.n - 2, "braid-deviation")
    a = reflection_generator(i, rc)
    b = reflection_generator(i + 1, rc)
    return (a @ b @ a) - (b @ a @ b)


def braid_deviation_check(rc: RepContext) -> CheckReport:
    report = CheckReport(f"braid-deviation n={rc.n}")
    q = rc.q
    one = rc.one()
    coeff = -((one - q) ** 2) / ((one + q) ** 2)
    for i in range(1, rc.n - 1):
        lhs = braid_deviation(i, rc)
        rhs = (reflection_generator(i, rc) - reflection_generator(i + 1, rc)).scale(coeff)
        _check_equal(
            report,
            f"S_{i}S_{i+1}S_{i} - S_{i+1}S_{i}S_{i+1} = -((1-q)^2/(1+q)^2)(S_{i}-S_{i+1})",
            lhs,
            rhs,
            rc.tol,
        )
    return report


def line_projection_matrix(rc: RepContext) -> Matrix:
    """Orthogonal projection of E onto the fixed line, e'-basis: the matrix
    (s^(i+j-2) / [n]_q); rank one, trace one, commutes with every S_i."""
    rc.require_splitting()

    def build():
        n = rc.n
        s = rc.s
        norm = rc.q_int(n)
        powers = []
        p = rc.one()
        for _ in range(n):
            powers.append(p)
            p = p * s
        data = [[powers[i] * powers[j] / norm for j in range(n)] for i in range(n)]
        return Matrix.exact(data, BASIS_E_PRIME) if rc.mode == "exact" else Matrix.approx(data, BASIS_E_PRIME)

    return rc.cached(("projection",), build)


def projection_check(rc: RepContext) -> CheckReport:
    report = CheckReport(f"projection n={rc.n}")
    p = line_projection_matrix(rc)
    _check_equal(report, "P^2 = P", p @ p, p, rc.tol)
    one = rc.one()
    report.add("trace(P) = 1", scalar_is_zero(p.trace() - one, rc.tol))
    for i in range(1, rc.n):
        s = reflection_generator(i, rc)
        _check_zero(report, f"[P, S_{i}] = 0", commutator(p, s), rc.tol)
    ell = fixed_vector(rc, BASIS_E_PRIME)
    norm = rc.q_int(rc.n)
    for j in range(rc.n):
        col = Matrix.column([p[(k, j)] for k in range(rc.n)], rc.mode)
        expected = ell.scale(ell[(j, 0)] / norm)
        report.add(f"P e'_{j+1} projects onto the fixed line", col.equals(expected, rc.tol))
    return report


# -- the reduced representation F and its bases ------------------------------


def reduced_gram_matrix(rc: RepContext) -> Matrix:
    """Tridiagonal Gram matrix of the f_i basis of F: diagonal [2]_q,
    off-diagonal -s.  Its k-th leading minor is [k+1]_q."""
    def build():
        m = rc.n - 1
        two = rc.q_int(2)
        s = rc.s
        zero = rc.qc.zero()
        data = [[zero] * m for _ in range(m)]
        for i in range(m):
            data[i][i] = two
            if i + 1 < m:
                data[i][i + 1] = -s
                data[i + 1][i] = -s
        return Matrix.exact(data) if rc.mode == "exact" else Matrix.approx(data)

    return rc.cached(("reduced-gram",), build)


def orthogonal_reduced_basis(rc: RepContext) -> list[Matrix]:
    """The rescaled Gram-Schmidt vectors v'_1, ..., v'_(n-1) of F in
    e'-coordinates, built by v'_1 = f_1, v'_i = [i]_q f_i + s v'_(i-1).

    Requires [k]_q != 0 for k <= n; raises naming the failing k otherwise.
    """
    def build():
        for k in range(1, rc.n + 1):
            if scalar_is_zero(rc.q_int(k), rc.tol):
                raise DomainError(f"[{k}]_q = 0: Gram-Schmidt breaks down at step {k}")
        vecs = [simple_root_vector(1, rc)]
        for i in range(2, rc.n):
            prev = vecs[-1].scale(rc.s)
            vecs.append(simple_root_vector(i, rc).scale(rc.q_int(i)) + prev)
        return vecs

    return rc.cached(("v-prime",), build)


def split_gram_diagonal(rc: RepContext) -> list:
    """Diagonal Gram entries of the split basis: [n]_q for the fixed vector,
    then [i]_q [i+1]_q for v'_i."""
    def build():
        out = [rc.q_int(rc.n)]
        for i in range(1, rc.n):
            out.append(rc.q_int(i) * rc.q_int(i + 1))
        return out

    return rc.cached(("split-gram",), build)


@dataclass
class SplitBasis:
    """Change of basis between e'-coordinates and the split basis."""

    matrix: Matrix          # columns: fixed vector, v'_1, ..., v'_(n-1)
    inverse: Matrix
    gram: list              # diagonal Gram entries, length n


def split_basis(rc: RepContext) -> SplitBasis:
    rc.require_full_factorial()

    def build():
        n = rc.n
        zero = rc.qc.zero()
        cols = [fixed_vector(rc, BASIS_E_PRIME)] + orthogonal_reduced_basis(rc)
        data = [[zero] * n for _ in range(n)]
        for j, c in enumerate(cols):
            flat = c.flatten()
            for i in range(n):
                data[i][j] = flat[i]
        mat = Matrix.exact(data, BASIS_SPLIT) if rc.mode == "exact" else Matrix.approx(data, BASIS_SPLIT)
        return SplitBasis(mat, inverse(mat), split_gram_diagonal(rc))

    return rc.cached(("split-basis",), build)


def orthonormal_split_basis(rc: RepContext) -> Matrix:
    """Floating-point orthonormal basis adapted to E = L + F: columns are the
    normalized fixed vector u_0 followed by u_1, ..., u_(n-1).  The
    normalizations involve square roots, so this matrix is always approx."""
    def build():
        sb = split_basis(rc)
        arr = sb.matrix.to_approx().data.astype(complex)
        cols = []
        for j in range(rc.n):
            norm = cmath.sqrt(complex(sb.gram[j]))
            cols.append(arr[:, j] / norm)
        return Matrix.approx(np.stack(cols, axis=1), BASIS_U)

    return rc.cached(("u-basis",), build)


def reflection_in_split_basis(i: int, rc: RepContext) -> Matrix:
    """The i-th reflection conjugated into the split basis (exact in exact
    mode; block diag(1, action on F))."""
    def build():
        sb = split_basis(rc)
        return (sb.inverse @ reflection_generator(i, rc, BASIS_E_PRIME) @ sb.matrix).with_basis(BASIS_SPLIT)

    return rc.cached(("reflection-split", i), build)


def reflection_in_orthonormal_basis(i: int, rc: RepContext) -> Matrix:
    """The i-th reflection in the orthonormal split basis (always approx)."""
    def build():
        u = orthonormal_split_basis(rc)
        s = reflection_generator(i, rc, BASIS_E_PRIME).to_approx()
        return (inverse(u) @ s @ u).with_basis(BASIS_U)

    return rc.cached(("reflection-u", i), build)


def reflection_coefficient_a(i: int, rc: RepContext):
    """a_i = [2]_(q^i) / ([2]_q [i]_q), the diagonal entry of the 2x2 block
    through which S_i acts on the orthonormal basis of F."""
    _index_check(i, rc.n - 1, "coefficient")
    qi = rc.q ** i
    return (1 + qi) / (rc.q_int(2) * rc.q_int(i))


def reflection_coefficient_b_squared(i: int, rc: RepContext):
    """b_i^2 = 4 q [i+1]_q [i-1]_q / ([2]_q [i]_q)^2, exact in exact mode."""
    _index_check(i, rc.n - 1, "coefficient")
    num = 4 * rc.q * rc.q_int(i + 1) * rc.q_int(i - 1)
    den = (rc.q_int(2) * rc.q_int(i)) ** 2
    return num / den


def orthonormal_reflection_block(i: int, rc: RepContext) -> Matrix:
    """The (n-1) x (n-1) matrix of S_i on the orthonormal basis of F.

    S_i fixes u_j for j not in {i-1, i} and acts on (u_(i-1), u_i) by
    [[a_i, b_i], [b_i, -a_i]]; for i = 1 this degenerates to u_1 -> -u_1.
    Always approx: b_i is an honest square root.
    """
    _index_check(i, rc.n - 1, "generator")

    def build():
        rc.require_full_factorial()
        m = rc.n - 1
        arr = np.eye(m, dtype=complex)
        if i == 1:
            arr[0, 0] = -1.0
        else:
            a = complex(reflection_coefficient_a(i, rc))
            b = cmath.sqrt(complex(reflection_coefficient_b_squared(i, rc)))
            arr[i - 2, i - 2] = a
            arr[i - 2, i - 1] = b
            arr[i - 1, i - 2] = b
            arr[i - 1, i - 1] = -a
        return Matrix.approx(arr, BASIS_U)

    return rc.cached(("delta", i), build)


@dataclass
class GramSchmidtResult:
    vectors: list            # v'_i in e'-coordinates
    norms: list              # <v'_i, v'_i> = [i]_q [i+1]_q
    u_basis: Matrix          # orthonormal basis of E (approx)
    report: CheckReport


def gram_schmidt_u_basis(rc: RepContext) -> GramSchmidtResult:
    """Build the orthogonal basis of F, verify the recurrence against the
    closed forms and the stated inner products, and return the orthonormal
    basis (floating point; in exact mode the exact pipeline keeps working
    with the unnormalized vectors and the diagonal Gram matrix instead)."""
    rc.require_full_factorial()
    report = CheckReport(f"gram-schmidt n={rc.n}")
    n, s = rc.n, rc.s
    vecs = orthogonal_reduced_basis(rc)
    norms = [rc.q_int(i) * rc.q_int(i + 1) for i in range(1, n)]

    report.add("v'_1 = f_1", vecs[0].equals(simple_root_vector(1, rc), rc.tol))

    # closed form in terms of the f_j
    for i in range(1, n):
        acc = Matrix.zero(n, 1, rc.mode)
        for j in range(1, i + 1):
            acc = acc + simple_root_vector(j, rc).scale(s ** (i - j) * rc.q_int(j))
        report.add(f"v'_{i} closed form over the f-basis", acc.equals(vecs[i - 1], rc.tol))

    # closed form in e'-coordinates
    for i in range(1, n):
        entries = [rc.qc.zero()] * n
        for j in range(1, i + 1):
            entries[j - 1] = s ** (i + j - 1)
        entries[i] = -rc.q_int(i)
        report.add(
            f"v'_{i} closed form over the e'-basis",
            Matrix.column(entries, rc.mode).equals(vecs[i - 1], rc.tol),
        )

    for i in range(1, n):
        val = bilinear(rc, vecs[i - 1], vecs[i - 1])
        report.add(
            f"<v'_{i}, v'_{i}> = [{i}]_q [{i + 1}]_q",
            scalar_is_zero(val - norms[i - 1], rc.tol),
        )
        # the monic vectors v_i = v'_i / [i]_q have norm [i+1]_q / [i]_q
        vi = vecs[i - 1].scale(1 / rc.q_int(i))
        target = rc.q_int(i + 1) / rc.q_int(i)
        report.add(
            f"<v_{i}, v_{i}> = [{i + 1}]_q/[{i}]_q",
            scalar_is_zero(bilinear(rc, vi, vi) - target, rc.tol),
        )

    for i in range(1, n):
        fi = simple_root_vector(i, rc)
        for j in range(1, n):
            val = bilinear(rc, fi, vecs[j - 1])
            if j == i:
                expected = rc.q_int(i + 1)
            elif j == i - 1:
                expected = -s * rc.q_int(i - 1)
            else:
                expected = rc.qc.zero()
            report.add(
                f"<f_{i}, v'_{j}> as stated",
                scalar_is_zero(val - expected, rc.tol),
            )

    return GramSchmidtResult(vecs, norms, orthonormal_split_basis(rc), report)


def orthonormal_action_check(rc: RepContext) -> CheckReport:
    """Checks on the u-basis reflection blocks: a_i^2 + b_i^2 = 1 (exactly,
    via b_i^2), the alternative formula a_i = [i]_(q^2) [i]_q^(-2), agreement
    with the conjugated reflections, and orthogonality/involutivity/twin
    relations of the blocks."""
    rc.require_full_factorial()
    report = CheckReport(f"orthonormal-action n={rc.n}")
    one = rc.one()
    for i in range(1, rc.n):
        a = reflection_coefficient_a(i, rc)
        b2 = reflection_coefficient_b_squared(i, rc)
        report.add(f"a_{i}^2 + b_{i}^2 = 1", scalar_is_zero(a * a + b2 - one, rc.tol))
        alt = q_int(i, rc.q * rc.q) / (rc.q_int(i) ** 2)
        report.add(f"a_{i} = [i]_(q^2) [i]_q^(-2)", scalar_is_zero(a - alt, rc.tol))

    deltas = [orthonormal_reflection_block(i, rc) for i in range(1, rc.n)]
    ident = Matrix.identity(rc.n - 1, "approx")
    tol = max(rc.tol, 1e-9)
    for i, d in enumerate(deltas, start=1):
        report.add(f"Delta_{i}^T Delta_{i} = 1", (d.transpose() @ d).equals(ident, tol))
        report.add(f"Delta_{i}^2 = 1", (d @ d).equals(ident, tol))
    for i in range(1, rc.n):
        for j in range(i + 2, rc.n):
            a, b = deltas[i - 1], deltas[j - 1]
            report.add(f"Delta_{i}Delta_{j} = Delta_{j}Delta_{i}", (a @ b).equals(b @ a, tol))

    # the blocks must agree with conjugating the e'-basis reflections into
    # the orthonormal split basis (dropping the trivial first coordinate)
    if rc.mode == "exact" or abs(complex(rc.q).imag) < rc.tol:
        for i in range(1, rc.n):
            conj = reflection_in_orthonormal_basis(i, rc)
            sub = Matrix.approx(conj.to_ndarray()[1:, 1:])
            report.add(
                f"Delta_{i} matches the conjugated reflection",
                sub.equals(deltas[i - 1], tol),
            )
    return report


def determinant(a: Matrix):
    """Determinant: exact fraction elimination, or numpy in approx mode."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    if a.mode == "approx":
        return complex(np.linalg.det(a.data))
    m = [list(row) for row in a.data]
    n = a.rows
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def reflection_formula_check(i: int, rc: RepContext) -> CheckReport:
    """S_i as the reflection in the hyperplane orthogonal to f_i:
    S_i v = v - 2 (<f_i, v>/<f_i, f_i>) f_i on all e'-basis vectors and all
    f_j, plus the named special values."""
    _index_check(i, rc.n - 1, "generator")
    rc.require_splitting()
    report = CheckReport(f"reflection-formula i={i} n={rc.n}")
    n = rc.n
    s = reflection_generator(i, rc)
    fi = simple_root_vector(i, rc)
    ff = bilinear(rc, fi, fi)
    report.add("<f_i, f_i> = 1 + q", scalar_is_zero(ff - (rc.one() + rc.q), rc.tol))

    def reflect(v: Matrix) -> Matrix:
        return v - fi.scale(2 * bilinear(rc, fi, v) / ff)

    for j in range(n):
        basis_vec = Matrix.column(
            [rc.one() if k == j else rc.qc.zero() for k in range(n)], rc.mode
        )
        report.add(
            f"S_{i} e'_{j+1} via the reflection formula",
            (s @ basis_vec).equals(reflect(basis_vec), rc.tol),
        )
    two_bq = 2 * rc.s / (rc.one() + rc.q)
    for j in range(1, n):
        fj = simple_root_vector(j, rc)
        image = s @ fj
        report.add(
            f"S_{i} f_{j} via the reflection formula", image.equals(reflect(fj), rc.tol)
        )
        if j == i:
            expected = -fj
        elif abs(j - i) == 1:
            expected = fj + fi.scale(two_bq)
        else:
            expected = fj
        report.add(f"S_{i} f_{j} closed form", image.equals(expected, rc.tol))

    ell = fixed_vector(rc, BASIS_E_PRIME)
    report.add("S_i fixes the fixed line", (s @ ell).equals(ell, rc.tol))
    report.extend(eigenvector_check(i, rc))
    return report


def appendix_check(rc: RepContext) -> CheckReport:
    """Whole appendix suite: Gram determinant, Gram-Schmidt identities, and
    the orthonormal-action coefficients."""
    report = CheckReport(f"appendix n={rc.n}")
    gram = reduced_gram_matrix(rc)
    for k in range(1, rc.n):
        sub = Matrix.exact([row[:k] for row in gram.data[:k]]) if rc.mode == "exact" else Matrix.approx(gram.data[:k, :k])
        det = determinant(sub)
        report.add(
            f"det of the leading {k}x{k} Gram block = [{k + 1}]_q",
            scalar_is_zero(det - rc.q_int(k + 1), rc.tol),
        )
    report.extend(gram_schmidt_u_basis(rc).report)
    report.extend(orthonormal_action_check(rc))
    return report
