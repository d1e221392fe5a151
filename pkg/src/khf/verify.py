"""Verification suites: every module invariant, run exhaustively at a
given type, with machine-readable pass/fail and minimal witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .equivariant import (
    billey_d,
    build_dmatrix,
    chevalley_monk_oracle,
    structure_constants,
)
from .harmonic import (
    build_operators,
    check_disjointness,
    check_sl4_nonsemisimple,
    h_element,
    kostant_form,
)
from .hodgefamily import (
    DeformParams,
    HodgeSolver,
    certify_limits,
    d_star_lambda,
    hodge_form_projection,
    hodge_form_series,
    laplacian_S_lambda,
    partial_lambda,
)
from .hodgefamily import check_claims as hodge_check_claims
from .invcomplex import betti_numbers, enumerate_basis
from .linalg import ExactMatrix, mat_kernel, mat_rank
from .roots import RootSystem
from .weyl import enumerate_weyl

#: complexes above this dimension are too large for exact Betti ranks
BETTI_DIM_LIMIT = 8000


@dataclass
class VerifyReport:
    suite: str
    type_name: str
    checks: list = field(default_factory=list)

    def add(self, check_id: str, ok: bool, witness: str = ""):
        entry = {"id": check_id, "status": "pass" if ok else "fail"}
        if not ok and witness:
            entry["witness"] = witness
        self.checks.append(entry)

    def run(self, check_id: str, fn):
        try:
            result = fn()
        except Exception as exc:  # failures become report entries
            result = (False, f"{type(exc).__name__}: {exc}")
        if isinstance(result, tuple):
            ok, witness = result
        else:
            ok, witness = result, ""
        self.add(check_id, ok, witness)

    @property
    def overall(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def to_json(self) -> dict:
        return {
            "schema": "khf/1",
            "suite": self.suite,
            "type": self.type_name,
            "checks": self.checks,
            "overall": self.overall,
        }


def _zero(n):
    return ExactMatrix([[Fraction(0)] * n for _ in range(n)])


def _is_zero_matrix(m: ExactMatrix) -> bool:
    for row in m.entries:
        for x in row:
            if hasattr(x, "is_zero"):
                if not x.is_zero():
                    return False
            elif x != 0:
                return False
    return True


class _Context:
    """Lazily built shared objects for one verification run."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self._cache = {}

    def get(self, name):
        if name not in self._cache:
            if name == "basis":
                self._cache[name] = enumerate_basis(self.rs)
            elif name == "group":
                self._cache[name] = enumerate_weyl(self.rs)
            elif name == "ops":
                self._cache[name] = build_operators(self.get("basis"))
            elif name == "dmatrix":
                self._cache[name] = build_dmatrix(
                    self.get("ops"), self.get("group")
                )
            elif name == "solver":
                self._cache[name] = HodgeSolver(self.get("ops"))
            else:
                raise KeyError(name)
        return self._cache[name]


def suite_complex(ctx: _Context, rep: VerifyReport) -> None:
    basis = ctx.get("basis")
    group = ctx.get("group")
    n = basis.dim
    z = _zero(n)
    p1, p2 = basis.matrix_partial1(), basis.matrix_partial2()
    d1, d2 = basis.matrix_d1(), basis.matrix_d2()
    P, D = p1 + p2, d1 + d2
    rep.run("complex.d_squared_zero", lambda: D @ D == z)
    rep.run("complex.partial_squared_zero", lambda: P @ P == z)
    rep.run(
        "complex.partial_infty_squared_zero",
        lambda: _is_zero_matrix(
            basis.matrix_partial_infty() @ basis.matrix_partial_infty()
        ),
    )
    Q = p1 - p2
    rep.run("complex.d_anticommutes_partial_infty", lambda: D @ Q + Q @ D == z)
    rep.run("complex.d1_p2_anticommute", lambda: d1 @ p2 + p2 @ d1 == z)
    rep.run("complex.d2_p1_anticommute", lambda: d2 @ p1 + p1 @ d2 == z)
    rep.run(
        "complex.matched_anticommutators_equal",
        lambda: d1 @ p1 + p1 @ d1 == d2 @ p2 + p2 @ d2,
    )

    def bigraded_symmetry():
        dims = basis.bigraded_dims()
        for (p, q), dim in dims.items():
            if dims.get((q, p)) != dim:
                return False, f"dim({p},{q}) != dim({q},{p})"
        return True, ""

    rep.run("complex.bigraded_symmetry", bigraded_symmetry)

    def betti():
        if basis.dim > BETTI_DIM_LIMIT:
            raise RuntimeError(
                f"complex dimension {basis.dim} beyond exact-rank limit"
            )
        got = betti_numbers(basis)
        lengths = {}
        for e in group.elements:
            lengths[e.length] = lengths.get(e.length, 0) + 1
        want = [
            lengths.get(d // 2, 0) if d % 2 == 0 else 0
            for d in range(len(got))
        ]
        return got == want, f"got {got}, want {want}"

    rep.run("complex.betti_numbers", betti)


def suite_harmonic(ctx: _Context, rep: VerifyReport) -> None:
    basis = ctx.get("basis")
    group = ctx.get("group")
    ops = ctx.get("ops")
    rep.run("harmonic.S_equals_L_plus_EI", lambda: ops.S - ops.L == ops.EI)

    def kernel_dim():
        k = len(mat_kernel(ops.S))
        return k == len(group), f"dim ker S = {k}, |W| = {len(group)}"

    rep.run("harmonic.ker_S_dimension", kernel_dim)
    rep.run(
        "harmonic.ker_S_meets_im_S_trivially",
        lambda: mat_rank(ops.S @ ops.S) == mat_rank(ops.S),
    )

    def l_kernel_support():
        phis = set()
        for w in group.elements:
            mask = 0
            for k in group.inversion_set(w):
                mask |= 1 << k
            phis.add(mask)
        for k, m in enumerate(basis.monomials):
            if (ops.L_eigen[k] == 0) != (m.neg in phis):
                return False, f"monomial {m!r}"
        return True, ""

    rep.run("harmonic.L_kernel_on_inversion_monomials", l_kernel_support)

    def harmonicity():
        P = basis.complexify(basis.matrix_partial())
        D = basis.complexify(basis.matrix_d())
        PI = basis.matrix_partial_infty()
        for w in group.elements:
            f = kostant_form(ops, group, w)
            v = basis.to_vector(f.element)
            for op in (P, D, PI):
                if not all(c.is_zero() for c in op.apply(v)):
                    return False, f"w = {w!r}"
            h = h_element(basis, group, w)
            ((hm, hc),) = h.terms.items()
            if f.element.terms.get(hm) != hc:
                return False, f"leading term at w = {w!r}"
            for m in f.element.terms:
                if m.bidegree != (w.length, w.length):
                    return False, f"bidegree at w = {w!r}"
        return True, ""

    rep.run("harmonic.forms_closed_with_leading_term", harmonicity)

    def disjoint():
        out = check_disjointness(basis)
        ok = out["disjoint"] and out["im_S_is_im_d_plus_im_partial"]
        return ok, str(out)

    rep.run("harmonic.disjointness_and_image_sum", disjoint)

    if str(ctx.rs.type) == "A3":
        def sl4():
            out = check_sl4_nonsemisimple(basis, ops)
            return out["not_semisimple"], str(out)

        rep.run("harmonic.sl4_not_semisimple", sl4)


def suite_dmatrix(ctx: _Context, rep: VerifyReport) -> None:
    group = ctx.get("group")
    rs = ctx.rs
    dm = ctx.get("dmatrix")

    def billey():
        for w1 in group.elements:
            for w in group.elements:
                if billey_d(group, w1, w) != dm.entry(w1, w):
                    return False, f"({w1!r}, {w!r})"
        return True, ""

    rep.run("dmatrix.equals_billey_oracle", billey)
    rep.run(
        "dmatrix.identity_row_is_one",
        lambda: all(
            dm.scalar[0, w.index] == 1 for w in group.elements
        ),
    )

    def diagonal():
        for i in range(rs.rank):
            r = group.simple_reflection(i)
            alpha = tuple(1 if k == i else 0 for k in range(rs.rank))
            if dm.scalar[r.index, r.index] != rs.killing_pair(alpha, rs.rho):
                return False, f"simple index {i}"
        return True, ""

    rep.run("dmatrix.simple_reflection_diagonal", diagonal)

    def support():
        for w1 in group.elements:
            for w in group.elements:
                if dm.scalar[w1.index, w.index] != 0 and not group.bruhat_leq(
                    w1, w
                ):
                    return False, f"({w1!r}, {w!r})"
        return True, ""

    rep.run("dmatrix.bruhat_support", support)

    sc = structure_constants(dm)
    M = dm.scalar

    def multiplicativity():
        n = len(group)
        for w1 in group.elements:
            C = sc.scalar[w1.index]
            left = ExactMatrix(
                [
                    [M[w1.index, j] * M[i, j] for j in range(n)]
                    for i in range(n)
                ]
            )
            right = C @ M
            if left != right:
                return False, f"w1 = {w1!r}"
        return True, ""

    rep.run("schubert.psi_multiplicativity", multiplicativity)

    def symmetry():
        for w1 in group.elements:
            for w2 in group.elements:
                if w2.index < w1.index:
                    continue
                for w in group.elements:
                    if sc.constant(w1, w2, w) != sc.constant(w2, w1, w):
                        return False, f"({w1!r},{w2!r},{w!r})"
        return True, ""

    rep.run("schubert.symmetric_in_factors", symmetry)

    def commuting():
        for w1 in group.elements:
            A = sc.scalar[w1.index]
            for w2 in group.elements:
                if w2.index <= w1.index:
                    continue
                B = sc.scalar[w2.index]
                if A @ B != B @ A:
                    return False, f"({w1!r},{w2!r})"
        return True, ""

    rep.run("schubert.c_matrices_commute", commuting)

    def at_zero():
        for w1 in group.elements:
            for w2 in group.elements:
                for w in group.elements:
                    v = sc.at_zero(w1, w2, w)
                    if v == 0:
                        continue
                    if w.length != w1.length + w2.length:
                        return False, f"grading ({w1!r},{w2!r},{w!r})"
                    if v.denominator != 1 or v < 0:
                        return False, f"value {v} at ({w1!r},{w2!r},{w!r})"
        return True, ""

    rep.run("schubert.u0_nonnegative_graded_integers", at_zero)

    def monk():
        for i in range(rs.rank):
            si = group.simple_reflection(i)
            for v in group.elements:
                oracle = chevalley_monk_oracle(group, i, v)
                for w in group.elements:
                    if sc.at_zero(si, v, w) != oracle.get(w.index, 0):
                        return False, f"(s{i + 1}, {v!r}, {w!r})"
        return True, ""

    rep.run("schubert.chevalley_monk_oracle", monk)


def suite_hodge(ctx: _Context, rep: VerifyReport) -> None:
    basis = ctx.get("basis")
    group = ctx.get("group")
    solver = ctx.get("solver")
    p = DeformParams.of([Fraction(4)] * ctx.rs.rank)

    def mixed():
        D = basis.complexify(basis.matrix_d())
        pl = partial_lambda(basis, p)
        return _is_zero_matrix(D @ pl + pl @ D)

    rep.run("hodge.mixed_complex_identity", mixed)
    rep.run(
        "hodge.d_star_squares_zero",
        lambda: d_star_lambda(basis, p) @ d_star_lambda(basis, p)
        == _zero(basis.dim),
    )

    def kernel():
        k = len(mat_kernel(laplacian_S_lambda(basis, p)))
        return k == len(group), f"dim ker = {k}"

    rep.run("hodge.ker_S_lambda_dimension", kernel)

    def routes():
        for w in group.elements:
            f1 = hodge_form_projection(solver, group, p, w)
            f2 = hodge_form_series(solver, group, p, w)
            if f1 != f2:
                return False, f"w = {w!r}"
        return True, ""

    rep.run("hodge.both_form_routes_agree", routes)

    def limits():
        out = certify_limits(solver, group, p, steps=8)
        witness = (
            f"finals: d*={out.d_star_distances[-1]}, "
            f"S={out.S_distances[-1]}, "
            f"forms={[x for x in out.form_distances if x is not None][-1:]}"
        )
        return out.passed, witness

    rep.run("hodge.certified_limits", limits)

    def claims():
        out = hodge_check_claims(solver, group, p)
        return out["all"], str(out)

    rep.run("hodge.exactness_claims", claims)


_SUITES = {
    "complex": [suite_complex],
    "harmonic": [suite_harmonic],
    "dmatrix": [suite_dmatrix],
    "hodge": [suite_hodge],
    "all": [suite_complex, suite_harmonic, suite_dmatrix, suite_hodge],
}


def verify_suite(rs: RootSystem, suite: str = "all") -> VerifyReport:
    if suite not in _SUITES:
        raise ValueError(
            f"unknown suite {suite!r}; choose from {sorted(_SUITES)}"
        )
    rep = VerifyReport(suite=suite, type_name=str(rs.type))
    ctx = _Context(rs)
    for fn in _SUITES[suite]:
        fn(ctx, rep)
    return rep
