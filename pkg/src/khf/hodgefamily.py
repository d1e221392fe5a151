"""Metric deformation of the harmonic theory and exact limit
certificates.

The deformation parameter is a tuple of rationals x_i > 1, one per
simple root, standing for the exponentials of the simple-root values of
a dominant direction; a positive root alpha = sum n_i alpha_i gets
x(alpha) = prod x_i^{n_i}.  Pushing every x_i to infinity along the
doubling sequence x_i * B^m realizes the dominant limit with exact
rational arithmetic at every step.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from .harmonic import HarmonicOperators, adjoint_wrt_gram, kostant_form
from .invcomplex import ComplexBasis, InvElement
from .linalg import (
    ExactMatrix,
    Inconsistent,
    SingularMatrix,
    mat_inverse,
    mat_kernel,
    mat_rank,
    mat_solve,
)
from .scalars import GR_ZERO, GaussianRational, i_power


class SingularParameter(Exception):
    pass


class NotInRegime(Exception):
    pass


DEFAULT_THRESHOLD = Fraction(1, 10**6)


def threshold_from_env() -> Fraction:
    raw = os.environ.get("KHF_TOL")
    if not raw:
        return DEFAULT_THRESHOLD
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        return DEFAULT_THRESHOLD


@dataclass(frozen=True)
class DeformParams:
    x: tuple  # one Fraction per simple root

    @staticmethod
    def of(values) -> "DeformParams":
        return DeformParams(tuple(Fraction(v) for v in values))

    def x_of_root(self, coords) -> Fraction:
        acc = Fraction(1)
        for xi, n in zip(self.x, coords):
            acc *= xi**n
        return acc

    def scaled(self, factor: Fraction) -> "DeformParams":
        return DeformParams(tuple(xi * factor for xi in self.x))


def c_alpha(p: DeformParams, coords) -> Fraction:
    x = p.x_of_root(coords)
    if x == 1:
        raise SingularParameter(f"x(alpha) = 1 at {coords}")
    return x / (x * x - 1)


def operator_A_diag(basis: ComplexBasis, p: DeformParams):
    """Diagonal of the multilinear extension of E_{+-a} -> c_a E_{+-a}."""
    rs = basis.rs
    c = [c_alpha(p, r.coords) for r in rs.positive_roots]
    out = []
    for m in basis.monomials:
        acc = Fraction(1)
        for a in m.neg_indices:
            acc *= c[a]
        for b in m.pos_indices:
            acc *= c[b]
        out.append(acc)
    return out


def operator_A(basis: ComplexBasis, p: DeformParams) -> ExactMatrix:
    diag = operator_A_diag(basis, p)
    n = basis.dim
    return ExactMatrix(
        [
            [diag[i] if i == j else Fraction(0) for j in range(n)]
            for i in range(n)
        ]
    )


def d_star_lambda(basis: ComplexBasis, p: DeformParams) -> ExactMatrix:
    """A^{-1} (Gram-adjoint of d) A; the degree minus-one operator of
    the deformed metric."""
    d_star = adjoint_wrt_gram(basis, basis.matrix_d())
    diag = operator_A_diag(basis, p)
    n = basis.dim
    return ExactMatrix(
        [
            [d_star[i, j] * diag[j] / diag[i] for j in range(n)]
            for i in range(n)
        ]
    )


def partial_lambda(basis: ComplexBasis, p: DeformParams) -> ExactMatrix:
    """J-conjugate of d_star_lambda, over Gaussian rationals."""
    ds = d_star_lambda(basis, p)
    n = basis.dim
    ent = [[GR_ZERO] * n for _ in range(n)]
    for j, m in enumerate(basis.monomials):
        pj, qj = m.bidegree
        for i in range(n):
            x = ds[i, j]
            if x == 0:
                continue
            pi, qi = basis.monomials[i].bidegree
            ent[i][j] = i_power((pj - qj) - (pi - qi)) * x
    return ExactMatrix(ent)


def laplacian_S_lambda(basis: ComplexBasis, p: DeformParams) -> ExactMatrix:
    ds = d_star_lambda(basis, p)
    d = basis.matrix_d()
    return d @ ds + ds @ d


@dataclass
class HodgeSolver:
    """Shared exact data for both harmonic-deformation routes: a basis
    of im(S), and the Green's operator of S on that image."""

    ops: HarmonicOperators
    ker_S: list = None  # columns spanning ker S
    im_S: list = None  # columns spanning im S
    greens: ExactMatrix = None  # S_1: zero on ker S, S^{-1} on im S

    def __post_init__(self):
        S = self.ops.S
        n = self.ops.basis.dim
        self.ker_S = mat_kernel(S)
        cols = [[S[i, j] for i in range(n)] for j in range(n)]
        im = []
        for col in cols:
            if any(col):
                stack = ExactMatrix(list(zip(*(im + [col]))))
                if mat_rank(stack) > len(im):
                    im.append(col)
        self.im_S = im
        if not self.im_S:
            self.greens = ExactMatrix(
                [[Fraction(0)] * n for _ in range(n)]
            )
            return
        # change of basis U = [ker | im]; S maps im-coords by T
        U = ExactMatrix(list(zip(*(self.ker_S + self.im_S))))
        Uinv = mat_inverse(U)
        k = len(self.ker_S)
        r = len(self.im_S)
        T = []
        for col in self.im_S:
            y = S.apply(col)
            coords = Uinv.apply(y)
            assert all(c == 0 for c in coords[:k])
            T.append(coords[k:])
        Tinv = mat_inverse(ExactMatrix(list(zip(*T))))
        # S_1 = M T^{-1} P_im U^{-1} with M the im-basis matrix
        M = ExactMatrix(list(zip(*self.im_S)))
        proj = ExactMatrix(
            [[Uinv[k + i, j] for j in range(n)] for i in range(r)]
        )
        self.greens = M @ Tinv @ proj


def hodge_form_projection(
    solver: HodgeSolver, group, p: DeformParams, w
) -> InvElement:
    """The element of ker S_lambda whose ker-S component is s^w."""
    ops = solver.ops
    basis = ops.basis
    S_l = laplacian_S_lambda(basis, p)
    K = mat_kernel(S_l)
    if len(K) != len(solver.ker_S):
        raise NotInRegime(
            f"dim ker S_lambda = {len(K)} != {len(solver.ker_S)}"
        )
    s = kostant_form(ops, group, w).element
    coeff, real = _split_scalar(basis, s)
    cols = K + [[-x for x in col] for col in solver.im_S]
    system = ExactMatrix(list(zip(*cols)))
    try:
        sol = mat_inverse(system).apply(real)
    except SingularMatrix:
        raise NotInRegime("kernel projection is not bijective here")
    a = sol[: len(K)]
    vec = [
        sum(a[t] * K[t][i] for t in range(len(K)))
        for i in range(basis.dim)
    ]
    return _scale_vec(basis, vec, coeff)


def hodge_form_series(
    solver: HodgeSolver, group, p: DeformParams, w
) -> InvElement:
    """(1 + S_1 (S_lambda - S))^{-1} s^w."""
    ops = solver.ops
    basis = ops.basis
    n = basis.dim
    F = laplacian_S_lambda(basis, p) - ops.S
    A = ExactMatrix.identity(n) + solver.greens @ F
    s = kostant_form(ops, group, w).element
    coeff, real = _split_scalar(basis, s)
    try:
        Ainv = mat_inverse(A)
    except SingularMatrix:
        raise NotInRegime("1 + S_1 F_lambda is singular at this parameter")
    return _scale_vec(basis, Ainv.apply(real), coeff)


def _split_scalar(basis, s: InvElement):
    """Kostant forms are a Gaussian scalar times a rational vector;
    factor that scalar out so the solves stay over the rationals."""
    items = s.sorted_terms()
    coeff = items[0][1]
    real = [Fraction(0)] * basis.dim
    for m, c in items:
        ratio = c / coeff
        assert ratio.im == 0
        real[basis.index[m]] = ratio.re
    return coeff, real


def _scale_vec(basis, vec, coeff: GaussianRational) -> InvElement:
    return InvElement(
        {m: coeff * vec[k] for k, m in enumerate(basis.monomials)}
    )


@dataclass
class DeformReport:
    type_name: str
    base: list
    ratio: Fraction
    steps: int
    threshold: Fraction
    d_star_distances: list = field(default_factory=list)
    S_distances: list = field(default_factory=list)
    form_distances: list = field(default_factory=list)
    skipped_steps: list = field(default_factory=list)
    monotone: bool = False
    below_threshold: bool = False

    @property
    def passed(self) -> bool:
        return self.monotone and self.below_threshold

    def to_json(self) -> dict:
        from .scalars import rat_str

        return {
            "schema": "khf/1",
            "type": self.type_name,
            "base": [rat_str(x) for x in self.base],
            "ratio": rat_str(self.ratio),
            "steps": self.steps,
            "threshold": rat_str(self.threshold),
            "d_star_distances": [rat_str(x) for x in self.d_star_distances],
            "S_distances": [rat_str(x) for x in self.S_distances],
            "form_distances": [rat_str(x) for x in self.form_distances],
            "skipped_steps": self.skipped_steps,
            "monotone": self.monotone,
            "below_threshold": self.below_threshold,
            "passed": self.passed,
        }


def _sup_dist(a: ExactMatrix, b: ExactMatrix) -> Fraction:
    best = Fraction(0)
    for r1, r2 in zip(a.entries, b.entries):
        for x, y in zip(r1, r2):
            v = abs(x - y)
            if v > best:
                best = v
    return best


def certify_limits(
    solver: HodgeSolver,
    group,
    base: DeformParams,
    steps: int = 8,
    ratio: Fraction = Fraction(2),
    threshold: Fraction = None,
) -> DeformReport:
    if steps < 2:
        raise ValueError("need at least two steps")
    if threshold is None:
        threshold = threshold_from_env()
    ops = solver.ops
    basis = ops.basis
    P = ops.basis.matrix_partial()
    S = ops.S
    forms = {
        w.index: basis.to_vector(kostant_form(ops, group, w).element)
        for w in group.elements
    }
    report = DeformReport(
        type_name=str(basis.rs.type),
        base=list(base.x),
        ratio=ratio,
        steps=steps,
        threshold=threshold,
    )
    for m in range(1, steps + 1):
        p = base.scaled(ratio**m)
        ds = d_star_lambda(basis, p)
        S_l = laplacian_S_lambda(basis, p)
        report.d_star_distances.append(_sup_dist(ds, P))
        report.S_distances.append(_sup_dist(S_l, S))
        try:
            worst = Fraction(0)
            for w in group.elements:
                f = hodge_form_projection(solver, group, p, w)
                diff = f - _scale_from(basis, forms[w.index])
                worst = max(worst, diff.sup_norm())
            report.form_distances.append(worst)
        except NotInRegime:
            report.skipped_steps.append(m)
            report.form_distances.append(None)
    report.monotone = _strictly_decreasing_tail(
        report.d_star_distances
    ) and _strictly_decreasing_tail(report.S_distances) and _strictly_decreasing_tail(
        [x for x in report.form_distances if x is not None]
    )
    finals = [
        report.d_star_distances[-1],
        report.S_distances[-1],
    ]
    tail_forms = [x for x in report.form_distances if x is not None]
    if tail_forms:
        finals.append(tail_forms[-1])
    report.below_threshold = all(v < threshold for v in finals)
    return report


def _scale_from(basis, vec) -> InvElement:
    return InvElement({m: vec[k] for k, m in enumerate(basis.monomials)})


def _strictly_decreasing_tail(xs) -> bool:
    """Strict decrease, except that a sequence is allowed to sit at an
    exact zero once it gets there (already-converged families)."""
    return all(a > b or a == b == 0 for a, b in zip(xs, xs[1:]))


def check_claims(solver: HodgeSolver, group, p: DeformParams) -> dict:
    """Exact-rank form of the kernel-dimension, image-sum, and
    disjointness claims, at the given deformation parameter."""
    ops = solver.ops
    basis = ops.basis
    S_l = laplacian_S_lambda(basis, p)
    n = basis.dim
    dim_ker = len(mat_kernel(S_l))
    claim1 = dim_ker == len(group)
    D = basis.matrix_d()
    P = basis.matrix_partial()
    cols = lambda m: [[m[i, j] for i in range(n)] for j in range(n)]

    def rank_of(vectors):
        live = [v for v in vectors if any(v)]
        if not live:
            return 0
        return mat_rank(ExactMatrix(list(zip(*live))))

    claim2 = mat_rank(ops.S) == rank_of(cols(D) + cols(P))
    ker_p = mat_kernel(P)
    ker_d = mat_kernel(D)
    disj1 = rank_of(cols(D)) + len(ker_p) == rank_of(cols(D) + ker_p)
    disj2 = rank_of(cols(P)) + len(ker_d) == rank_of(cols(P) + ker_d)
    # the comparison map 1 + L_0 E_I is injective from ker S into ker L
    phi = ExactMatrix.identity(n) + ops.L0 @ ops.EI
    imgs = [phi.apply(v) for v in solver.ker_S]
    injective = rank_of(imgs) == len(solver.ker_S)
    into_ker_L = all(
        all(x == 0 for x in ops.L.apply(v)) for v in imgs
    )
    return {
        "dim_ker_S_lambda": dim_ker,
        "claim_kernel_dimension": claim1,
        "claim_image_sum": claim2,
        "claim_disjointness": disj1 and disj2,
        "phi_injective_into_ker_L": injective and into_ker_L,
        "all": claim1 and claim2 and disj1 and disj2 and injective and into_ker_L,
    }
