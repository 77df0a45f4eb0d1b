"""Desk-scale certification of the double-centralizer statements: commutant
dimensions, diagram-image dimensions, faithfulness thresholds, and
decomposition counts.

The commutant of a family of m x m generators is the nullspace of the
stacked commutator systems: with row-major vectorization,
vec(G X - X G) = (kron(G, I) - kron(I, G^T)) vec(X), so the commutant is
the joint kernel over the generators.  Exact mode assembles the stacked
integer system and eliminates once; approx mode accumulates the Hermitian
Gram matrix of the stack (four Kronecker terms per generator, never
materializing the stack) and reads the kernel off a Hermitian
eigendecomposition.

The image dimension of the diagram algebra has a combinatorial shortcut:
in the orthonormal basis the diagram matrices at delta' = 1 are 0/1
indicator matrices, so their pairwise Frobenius inner products are
tr(Phi(flip d1) Phi(d2)) = dim^(loops) * dim^(free closure components),
an integer computable from diagram composition alone.  The rank of that
integer Gram matrix is the span dimension of the images (the actual images
differ only by nonzero per-diagram scalars and a fixed similarity, neither
of which moves the span dimension).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diagrams import PartialDiagram, compose
from .hecke import RepContext
from .linalg import (
    Matrix,
    SpanTracker,
    _echelon_int,
    _integerize_row,
    _kernel_from_echelon,
    span_dimension,
)
from .reporting import CheckReport
from .scalars import (
    AdmissibilityReport,
    DomainError,
    is_q_admissible,
    scalar_is_zero,
    scalar_to_json,
)
from .tensor_action import (
    SPACE_FULL,
    SPACE_REDUCED,
    TensorContext,
    algebra_generator_images,
    diagram_family,
    diagram_images,
    group_generators,
)


class InadmissibleParameterError(ValueError):
    """Raised when a duality check is asked to run at an excluded or
    degenerate q without forcing."""

    def __init__(self, report: AdmissibilityReport):
        self.report = report
        failed = "; ".join(report.failed_hypotheses())
        super().__init__(f"q fails the duality hypotheses: {failed}")


# -- commutants -------------------------------------------------------------


def _exact_commutator_rows(g: Matrix) -> list[list[int]]:
    """Integer rows of the system vec(GX - XG) = 0 (scaling G does not
    change its commutant, so G is integerized first)."""
    m = g.rows
    flat = _integerize_row(g.flatten())
    gi = [flat[i * m:(i + 1) * m] for i in range(m)]
    rows = []
    for i in range(m):
        for j in range(m):
            row = [0] * (m * m)
            for k in range(m):
                v = gi[i][k]
                if v:
                    row[k * m + j] += v
            for l in range(m):
                v = gi[l][j]
                if v:
                    row[i * m + l] -= v
            if any(row):
                rows.append(row)
    return rows


def _approx_commutant_gram(gens: list[np.ndarray]) -> np.ndarray:
    """Sum over generators of A^H A for A = kron(G, I) - kron(I, G^T)."""
    m = gens[0].shape[0]
    dtype = complex if any(np.iscomplexobj(g) for g in gens) else float
    eye = np.eye(m, dtype=dtype)
    gram = np.zeros((m * m, m * m), dtype=dtype)
    for g in gens:
        g = g.astype(dtype)
        gh = g.conj().T
        gram += np.kron(gh @ g, eye)
        gram -= np.kron(gh, g.T)
        gram -= np.kron(g, g.conj())
        gram += np.kron(eye, g.conj() @ g.T)
    return gram


def commutant_dimension(generators: list[Matrix], tol: float = 1e-9, need_basis: bool = False):
    """Dimension (and optionally a basis) of {X : XG = GX for all G}."""
    if not generators:
        raise DomainError("need at least one generator")
    m = generators[0].rows
    if any(g.rows != m or g.cols != m for g in generators):
        raise DomainError("generators must be square and equal-sized")
    mode = generators[0].mode
    if mode == "exact":
        rows = []
        for g in generators:
            rows.extend(_exact_commutator_rows(g))
        if not rows:
            dim = m * m
            basis = None
            if need_basis:
                basis = []
                for i in range(m):
                    for j in range(m):
                        mat = Matrix.zero(m, m, "exact")
                        mat.data[i][j] = Fraction(1)
                        basis.append(mat)
            return (dim, basis) if need_basis else (dim, None)
        echelon, pivots = _echelon_int(rows, m * m)
        if not need_basis:
            return m * m - len(pivots), None
        vecs = _kernel_from_echelon(echelon, pivots, m * m)
        basis = [
            Matrix.exact([v[i * m:(i + 1) * m] for i in range(m)]) for v in vecs
        ]
        return len(basis), basis
    arrs = [g.data for g in generators]
    gram = _approx_commutant_gram(arrs)
    if need_basis:
        vals, vecs = np.linalg.eigh(gram)
    else:
        vals = np.linalg.eigvalsh(gram)
        vecs = None
    top = float(vals[-1].real) if vals.size else 0.0
    if top <= 0:
        kernel_idx = list(range(m * m))
    else:
        kernel_idx = [i for i in range(len(vals)) if vals[i] <= tol * top]
    if not need_basis:
        return len(kernel_idx), None
    basis = [Matrix.approx(vecs[:, i].reshape(m, m)) for i in kernel_idx]
    return len(basis), basis


def enveloping_span_dimension(generators: list[Matrix], max_len: int = 12, tol: float = 1e-9):
    """Dimension of the span of all words in the generators (with the
    identity), grown breadth-first until the rank saturates; returns
    (dimension, saturated)."""
    if not generators:
        raise DomainError("need at least one generator")
    mode = generators[0].mode
    m = generators[0].rows
    tracker = SpanTracker(mode, tol)
    tracker.add_matrix(Matrix.identity(m, mode))
    frontier = [g for g in generators if tracker.add_matrix(g)]
    length = 1
    while frontier and length < max_len:
        new_frontier = []
        for w in frontier:
            for g in generators:
                prod = w @ g
                if tracker.add_matrix(prod):
                    new_frontier.append(prod)
        frontier = new_frontier
        length += 1
    return tracker.dimension, not frontier


# -- diagram-image dimension -------------------------------------------------


def _closure_free_components(d: PartialDiagram) -> int:
    """Components of the trace closure of d (top i glued to bottom i') that
    contain no singleton; each contributes a free index worth dim."""
    r = d.r
    parent = list(range(r + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pinned = set()
    for b in d.blocks:
        strands = [v if v <= r else v - r for v in b]
        if len(b) == 1:
            pinned.add(strands[0])
        else:
            ra, rb = find(strands[0]), find(strands[1])
            if ra != rb:
                parent[rb] = ra
    components: dict[int, bool] = {}
    for v in range(1, r + 1):
        root = find(v)
        components.setdefault(root, False)
    for v in pinned:
        components[find(v)] = True
    return sum(1 for has_pin in components.values() if not has_pin)


def functor_trace(d: PartialDiagram, dim: int) -> int:
    """Trace of the indicator image of d on a dim-dimensional site space:
    dim^(free closure components)."""
    return dim ** _closure_free_components(d)


def image_gram_rank(diagrams: list[PartialDiagram], dim: int) -> int:
    """Exact span dimension of the indicator images via the integer Gram
    matrix G[i,j] = tr(Phi(d_i)^T Phi(d_j)) = dim^loops * trace(d_i^T o d_j)."""
    flipped = [d.flip() for d in diagrams]
    size = len(diagrams)
    gram = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            tr = compose(flipped[i], diagrams[j])
            gram[i][j] = dim ** tr.loops * functor_trace(tr.result, dim)
    _, pivots = _echelon_int([row[:] for row in gram], size)
    return len(pivots)


def diagram_image_dimension(tc: TensorContext, delta_prime, direct_limit: int = 32) -> int:
    """Span dimension of all diagram images; computed directly for small
    tensor spaces and through the exact Gram-trace shortcut otherwise."""
    diagrams = diagram_family(tc)
    if tc.dim <= direct_limit:
        return span_dimension(diagram_images(tc, delta_prime), tc.tol)
    return image_gram_rank(diagrams, tc.local_dim)


# -- partition counting ------------------------------------------------------


def _partitions_of(k: int):
    """Partitions of k as weakly decreasing tuples."""
    if k == 0:
        yield ()
        return

    def rec(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - part, part):
                yield (part,) + rest

    yield from rec(k, k)


def lambda_count(n: int, r: int) -> int:
    """Number of partitions of 0..r whose conjugate's first two parts sum
    to at most n-1 (the bimodule summand count)."""
    if n < 2 or r < 0:
        raise DomainError("need n >= 2 and r >= 0")
    count = 0
    for k in range(r + 1):
        for lam in _partitions_of(k):
            conj1 = len(lam)
            conj2 = sum(1 for part in lam if part >= 2)
            if conj1 + conj2 <= n - 1:
                count += 1
    return count


def center_dimension(algebra_basis: list[Matrix], group_generators: list[Matrix],
                     tol: float = 1e-9, commutant_basis: list[Matrix] | None = None) -> int:
    """Dimension of the space of matrices commuting with both the group
    generators and the algebra basis.

    Any such matrix lies in the commutant of the group action, so the
    computation runs in commutant coordinates: solve
    [sum_a x_a K_a, B] = 0 for every B in the algebra basis.
    """
    if commutant_basis is None:
        _, commutant_basis = commutant_dimension(group_generators, tol, need_basis=True)
    if not commutant_basis:
        return 0
    mode = commutant_basis[0].mode
    columns = []
    for ka in commutant_basis:
        stacked = []
        for b in algebra_basis:
            comm = (ka @ b) - (b @ ka)
            stacked.extend(comm.flatten())
        columns.append(stacked)
    nrows = len(columns[0])
    if mode == "exact":
        system = Matrix.exact([[columns[a][i] for a in range(len(columns))] for i in range(nrows)])
    else:
        arr = np.array([[complex(columns[a][i]) for a in range(len(columns))] for i in range(nrows)])
        system = Matrix.approx(arr)
    from .linalg import nullspace

    dim, _ = nullspace(system, tol)
    return dim


# -- the headline checks -----------------------------------------------------


@dataclass
class DualityReport:
    """Everything the double-centralizer verification produced for one
    configuration."""

    n: int
    r: int
    q: object
    delta_prime: object
    space: str
    mode: str
    dim_commutant: int
    dim_diagram_image: int
    dim_pb_abstract: int
    faithful: bool
    faithful_expected: bool
    double_centralizer_ok: bool
    center_dim: int | None = None
    lambda_count: int | None = None
    center_ok: bool | None = None
    dim_group_envelope: int | None = None
    envelope_saturated: bool | None = None
    reverse_ok: bool | None = None
    admissibility: AdmissibilityReport | None = None
    forced: bool = False

    @property
    def faithful_matches_threshold(self) -> bool:
        return self.faithful == self.faithful_expected

    @property
    def ok(self) -> bool:
        checks = [self.double_centralizer_ok, self.faithful_matches_threshold]
        if self.center_ok is not None:
            checks.append(self.center_ok)
        if self.reverse_ok is not None:
            checks.append(self.reverse_ok)
        return all(checks)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "r": self.r,
            "q": scalar_to_json(self.q) if not isinstance(self.q, (dict, str)) else self.q,
            "delta_prime": scalar_to_json(self.delta_prime)
            if not isinstance(self.delta_prime, (dict, str))
            else self.delta_prime,
            "space": self.space,
            "mode": self.mode,
            "dim_commutant": self.dim_commutant,
            "dim_diagram_image": self.dim_diagram_image,
            "dim_pb_abstract": self.dim_pb_abstract,
            "faithful": self.faithful,
            "faithful_expected": self.faithful_expected,
            "faithful_matches_threshold": self.faithful_matches_threshold,
            "double_centralizer_ok": self.double_centralizer_ok,
            "ok": self.ok,
            "forced": self.forced,
        }
        if self.center_dim is not None:
            out["center_dim"] = self.center_dim
            out["lambda_count"] = self.lambda_count
            out["center_ok"] = self.center_ok
        if self.dim_group_envelope is not None:
            out["dim_group_envelope"] = self.dim_group_envelope
            out["envelope_saturated"] = self.envelope_saturated
            out["reverse_ok"] = self.reverse_ok
        if self.admissibility is not None:
            out["admissibility"] = self.admissibility.to_json()
        return out

    def csv_row(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "delta_prime": str(self.delta_prime),
            "space": self.space,
            "mode": self.mode,
            "dim_commutant": self.dim_commutant,
            "dim_diagram_image": self.dim_diagram_image,
            "dim_pb_abstract": self.dim_pb_abstract,
            "faithful": self.faithful,
            "double_centralizer_ok": self.double_centralizer_ok,
            "center_dim": self.center_dim if self.center_dim is not None else "",
            "lambda_count": self.lambda_count if self.lambda_count is not None else "",
            "ok": self.ok,
        }


def _gate_admissibility(rc: RepContext, force: bool) -> AdmissibilityReport:
    report = is_q_admissible(rc.qc, rc.n)
    if not report.admissible and not force:
        raise InadmissibleParameterError(report)
    return report


EXACT_SIZE_LIMIT = 256


def schur_weyl_check(rc: RepContext, r: int, delta_prime=Fraction(1), *,
                     center: bool = False, reverse: str = "auto",
                     force: bool = False, big: bool = False,
                     max_word_len: int = 12) -> DualityReport:
    """The full-space duality pipeline: commutant of the diagonal twin
    action on the r-th tensor power of E versus the partial Brauer diagram
    images at (delta, delta') = (n, delta_prime)."""
    if scalar_is_zero(delta_prime):
        raise DomainError("delta' must be nonzero")
    admissibility = _gate_admissibility(rc, force)
    tc = TensorContext(rc, r, SPACE_FULL)
    if rc.mode == "exact" and tc.dim > EXACT_SIZE_LIMIT and not big:
        raise DomainError(
            f"exact tensor dimension {tc.dim} exceeds {EXACT_SIZE_LIMIT}; "
            "rerun in approx mode or pass big=True"
        )
    gens = group_generators(tc)
    need_basis = center
    dim_comm, comm_basis = commutant_dimension(gens, rc.tol, need_basis=need_basis)
    dim_image = diagram_image_dimension(tc, delta_prime)
    diagrams = diagram_family(tc)
    dim_pb = len(diagrams)
    faithful = dim_image == dim_pb
    report = DualityReport(
        n=rc.n,
        r=r,
        q=rc.q,
        delta_prime=delta_prime,
        space=SPACE_FULL,
        mode=rc.mode,
        dim_commutant=dim_comm,
        dim_diagram_image=dim_image,
        dim_pb_abstract=dim_pb,
        faithful=faithful,
        faithful_expected=rc.n > r,
        double_centralizer_ok=dim_comm == dim_image,
        admissibility=admissibility,
        forced=force and not admissibility.admissible,
    )
    run_reverse = reverse == "on" or (reverse == "auto" and tc.dim <= 32)
    if run_reverse:
        alg_gens = algebra_generator_images(tc, delta_prime)
        dim_alg_comm, _ = commutant_dimension(alg_gens, rc.tol)
        dim_env, saturated = enveloping_span_dimension(gens, max_word_len, rc.tol)
        report.dim_group_envelope = dim_env
        report.envelope_saturated = saturated
        report.reverse_ok = dim_alg_comm == dim_env
    if center:
        alg_gens = algebra_generator_images(tc, delta_prime)
        cdim = center_dimension(alg_gens, gens, rc.tol, commutant_basis=comm_basis)
        report.center_dim = cdim
        report.lambda_count = lambda_count(rc.n, r)
        report.center_ok = cdim == report.lambda_count
    return report


def brauer_duality_check(rc: RepContext, r: int, *, force: bool = False,
                         reverse: str = "auto", big: bool = False,
                         max_word_len: int = 12) -> DualityReport:
    """The reduced-space pipeline: the twin action on the r-th power of F
    versus the Brauer algebra at parameter n-1; faithful exactly when
    n - 1 >= 2r."""
    admissibility = _gate_admissibility(rc, force)
    tc = TensorContext(rc, r, SPACE_REDUCED)
    if rc.mode == "exact" and tc.dim > EXACT_SIZE_LIMIT and not big:
        raise DomainError(
            f"exact tensor dimension {tc.dim} exceeds {EXACT_SIZE_LIMIT}; "
            "rerun in approx mode or pass big=True"
        )
    gens = group_generators(tc)
    dim_comm, _ = commutant_dimension(gens, rc.tol)
    dim_image = diagram_image_dimension(tc, 1)
    diagrams = diagram_family(tc)
    dim_pb = len(diagrams)  # (2r-1)!!
    faithful = dim_image == dim_pb
    report = DualityReport(
        n=rc.n,
        r=r,
        q=rc.q,
        delta_prime=Fraction(1),
        space=SPACE_REDUCED,
        mode=rc.mode,
        dim_commutant=dim_comm,
        dim_diagram_image=dim_image,
        dim_pb_abstract=dim_pb,
        faithful=faithful,
        faithful_expected=rc.n - 1 >= 2 * r,
        double_centralizer_ok=dim_comm == dim_image,
        admissibility=admissibility,
        forced=force and not admissibility.admissible,
    )
    run_reverse = reverse == "on" or (reverse == "auto" and tc.dim <= 32)
    if run_reverse:
        alg_gens = algebra_generator_images(tc, 1)
        dim_alg_comm, _ = commutant_dimension(alg_gens, rc.tol)
        dim_env, saturated = enveloping_span_dimension(gens, max_word_len, rc.tol)
        report.dim_group_envelope = dim_env
        report.envelope_saturated = saturated
        report.reverse_ok = dim_alg_comm == dim_env
    return report


def eigen_multiplicity_commutant(diag_entries: list, tol: float = 1e-9) -> int:
    """Oracle: the commutant of a single diagonalizable matrix has dimension
    the sum of squared eigenvalue multiplicities."""
    counts: dict = {}
    for x in diag_entries:
        key = None
        for existing in counts:
            if abs(complex(existing) - complex(x)) <= tol:
                key = existing
                break
        counts[key if key is not None else x] = counts.get(key if key is not None else x, 0) + 1
    return sum(c * c for c in counts.values())


def duality_relation_check(tc: TensorContext, delta_prime) -> CheckReport:
    """Commutation of every generator image with every group generator."""
    report = CheckReport(f"tensor-commutation n={tc.rc.n} r={tc.r} space={tc.space}")
    gens = group_generators(tc)
    alg = algebra_generator_images(tc, delta_prime)
    for gi, g in enumerate(gens, start=1):
        for ai, a in enumerate(alg):
            comm = (g @ a) - (a @ g)
            report.add(f"[G_{gi}, A_{ai}] = 0", comm.is_zero(max(tc.tol, 1e-9)))
    return report
