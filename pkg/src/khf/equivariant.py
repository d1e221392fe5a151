"""The circle-equivariant pipeline: normalizations, the D-matrix, its
Billey-formula oracle, and Schubert structure constants.

Every D entry is a single u-monomial of degree equal to the length of
its row element, so the whole matrix factors as diag(u^length) times a
scalar rational matrix.  Structure-constant matrices are computed by
conjugation in that scalar factor, with the u-degree carried as
bookkeeping (an exact-degree invariant, checked during construction).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .harmonic import HarmonicOperators, kostant_form
from .invcomplex import pairing, pi_power_at
from .linalg import ExactMatrix, SingularMatrix, mat_inverse
from .scalars import Monomial
from .weyl import WeylGroup


class NonRealValue(Exception):
    pass


class SingularScalarPart(Exception):
    pass


def lambda_norm(group: WeylGroup, w) -> Fraction:
    """P_w = product of <<rho, alpha>> over the inversion set of w.

    (The classical normalization constant of w carries 2*pi factors;
    they are dropped here, which is what makes the diagonal entries for
    simple reflections come out as u<<alpha, rho>>.)
    """
    rs = group.rs
    acc = Fraction(1)
    for k in group.inversion_set(w):
        acc *= rs.killing_pair(rs.rho, rs.positive_roots[k].coords)
    return acc


def F_value(ops: HarmonicOperators, group: WeylGroup, w1, w) -> Fraction:
    """F^{w1}(w): the harmonic form of w1 paired against the l(w1)-th
    divided power of the bivector at the point w."""
    s = kostant_form(ops, group, w1).element
    val = pairing(s, pi_power_at(ops.basis.rs, group, w, w1.length))
    if val.im != 0:
        raise NonRealValue(f"F^{w1!r}({w!r}) = {val!r}")
    return val.re


@dataclass
class DMatrix:
    group: WeylGroup
    #: scalar part: entries[w1][w] with the u^{l(w1)} factor stripped
    scalar: ExactMatrix = None

    def entry(self, w1, w) -> Monomial:
        return Monomial.of(self.scalar[w1.index, w.index], w1.length)

    def to_rows(self):
        g = self.group
        return [
            [self.entry(w1, w).to_json() for w in g.elements]
            for w1 in g.elements
        ]


def build_dmatrix(ops: HarmonicOperators, group: WeylGroup) -> DMatrix:
    n = len(group)
    forms = {w.index: kostant_form(ops, group, w).element for w in group.elements}
    rs = ops.basis.rs
    ent = [[Fraction(0)] * n for _ in range(n)]
    for w1 in group.elements:
        P = lambda_norm(group, w1)
        s = forms[w1.index]
        for w in group.elements:
            val = pairing(s, pi_power_at(rs, group, w, w1.length))
            if val.im != 0:
                raise NonRealValue(f"F^{w1!r}({w!r}) = {val!r}")
            ent[w1.index][w.index] = P * val.re
    dm = DMatrix(group=group, scalar=ExactMatrix(ent))
    _validate_dmatrix(dm)
    return dm


def _validate_dmatrix(dm: DMatrix) -> None:
    g = dm.group
    rs = g.rs
    for w in g.elements:
        assert dm.scalar[0, w.index] == 1, "first row must be all ones"
    for i in range(rs.rank):
        r = g.simple_reflection(i)
        alpha = tuple(1 if k == i else 0 for k in range(rs.rank))
        assert dm.scalar[r.index, r.index] == rs.killing_pair(alpha, rs.rho)
    for w1 in g.elements:
        for w in g.elements:
            if dm.scalar[w1.index, w.index] != 0 and not g.bruhat_leq(w1, w):
                raise AssertionError(
                    f"support outside Bruhat order at ({w1!r}, {w!r})"
                )


def billey_d(group: WeylGroup, w1, w) -> Monomial:
    """Independent oracle for the (w1, w) entry: sum over the reduced
    subwords of the canonical word of w that multiply out to w1, each
    contributing the product of u<<rho, beta_j>> over its positions."""
    rs = group.rs
    word = w.word
    betas = []
    prefix = group.identity
    for i in word:
        alpha = tuple(1 if k == i else 0 for k in range(rs.rank))
        betas.append(prefix.act(alpha))
        prefix = group.multiply(prefix, group.simple_reflection(i))
    # DP over positions: state = partial product, value = coefficient sum
    states = {group.identity.index: Fraction(1)}
    for j, i in enumerate(word):
        s_i = group.simple_reflection(i)
        factor = rs.killing_pair(rs.rho, betas[j])
        nxt = dict(states)
        for vidx, coeff in states.items():
            v = group.elements[vidx]
            vs = group.multiply(v, s_i)
            if vs.length == v.length + 1:
                nxt[vs.index] = nxt.get(vs.index, Fraction(0)) + coeff * factor
        states = nxt
    return Monomial.of(states.get(w1.index, Fraction(0)), w1.length)


@dataclass
class StructureConstants:
    group: WeylGroup
    #: scalar[w1] is the conjugated matrix whose (w2, w) coefficient,
    #: together with degree l(w1)+l(w2)-l(w), is the constant
    scalar: dict = field(default_factory=dict)

    def constant(self, w1, w2, w) -> Monomial:
        deg = w1.length + w2.length - w.length
        c = self.scalar[w1.index][w2.index, w.index]
        if c == 0:
            return Monomial.zero()
        return Monomial.of(c, deg)

    def at_zero(self, w1, w2, w) -> Fraction:
        return self.constant(w1, w2, w).eval_at_zero()


def structure_constants(dm: DMatrix) -> StructureConstants:
    g = dm.group
    n = len(g)
    M = dm.scalar
    try:
        Minv = mat_inverse(M)
    except SingularMatrix:
        raise SingularScalarPart(
            "scalar part of the D-matrix is not invertible"
        )
    out = StructureConstants(group=g)
    for w1 in g.elements:
        row = [M[w1.index, j] for j in range(n)]
        MD = ExactMatrix(
            [[M[i, j] * row[j] for j in range(n)] for i in range(n)]
        )
        C = MD @ Minv
        _validate_cmatrix(g, w1, C)
        out.scalar[w1.index] = C
    return out


def _validate_cmatrix(g, w1, C) -> None:
    for w2 in g.elements:
        for w in g.elements:
            c = C[w2.index, w.index]
            if c == 0:
                continue
            deg = w1.length + w2.length - w.length
            if deg < 0:
                raise AssertionError(
                    f"negative-degree constant at ({w1!r},{w2!r},{w!r})"
                )
            if not (g.bruhat_leq(w1, w) and g.bruhat_leq(w2, w)):
                raise AssertionError(
                    f"support outside Bruhat order at ({w1!r},{w2!r},{w!r})"
                )


def chevalley_monk_oracle(group: WeylGroup, i: int, v):
    """Coefficients of the degree-one product: for each reflection
    through a positive root beta with l(v s_beta) = l(v) + 1, the class
    of v s_beta picks up the i-th coroot coordinate of beta."""
    rs = group.rs
    out = {}
    for k, r in enumerate(rs.positive_roots):
        refl = _root_reflection(group, r.coords)
        vs = group.multiply(v, refl)
        if vs.length == v.length + 1:
            coeff = rs.coroot_coords(r.coords)[i]
            if coeff:
                out[vs.index] = out.get(vs.index, 0) + coeff
    return out


def _root_reflection(group: WeylGroup, coords):
    rs = group.rs
    n = rs.rank
    coroot = rs.coroot_coords(coords)
    # s_beta(alpha_j) = alpha_j - <alpha_j, beta-coroot> beta
    pairs = [
        sum(coroot[k] * rs.cartan[j][k] for k in range(n)) for j in range(n)
    ]
    rows = tuple(
        tuple(
            (1 if i == j else 0) - pairs[j] * coords[i] for j in range(n)
        )
        for i in range(n)
    )
    return group._by_matrix[rows]


def dmatrix_document(dm: DMatrix) -> dict:
    g = dm.group
    return {
        "schema": "khf/1",
        "type": str(g.rs.type),
        "order": len(g),
        "rows": dm.to_rows(),
    }


def schubert_document(sc: StructureConstants, at_zero: bool = False) -> dict:
    g = sc.group
    triples = []
    for w1 in g.elements:
        for w2 in g.elements:
            for w in g.elements:
                mono = sc.constant(w1, w2, w)
                if mono.is_zero():
                    continue
                if at_zero:
                    v = mono.eval_at_zero()
                    if v == 0:
                        continue
                    triples.append(
                        {"w1": w1.index, "w2": w2.index, "w": w.index,
                         "value": str(v)}
                    )
                else:
                    triples.append(
                        {"w1": w1.index, "w2": w2.index, "w": w.index,
                         "coeff": mono.to_json()}
                    )
    return {
        "schema": "khf/1",
        "type": str(g.rs.type),
        "at_zero": at_zero,
        "constants": triples,
    }
