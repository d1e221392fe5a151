"""Harmonic machinery on the invariant complex.

All operators here are real (rational) matrices in the canonical
monomial basis; the only complex data is the scalar coefficient of each
h-element, which rides along unchanged through the (real) Neumann
series for the harmonic forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .invcomplex import BiMonomial, ComplexBasis, InvElement, gram_weight
from .linalg import ExactMatrix, mat_kernel, mat_rank
from .scalars import i_power


class SeriesDiverged(Exception):
    pass


class WrongType(Exception):
    pass


def h_element(basis: ComplexBasis, group, w) -> InvElement:
    """The degree-(l, l) generator attached to w: the single monomial
    (Phi_{w^{-1}}, Phi_{w^{-1}}) with coefficient (-1)^(l(l-1)/2) i^l."""
    l = w.length
    mask = 0
    for k in group.inversion_set(group.inverse(w)):
        mask |= 1 << k
    coeff = i_power(l) * Fraction((-1) ** (l * (l - 1) // 2))
    return InvElement.monomial(BiMonomial(mask, mask), coeff)


def _replace_sign(mask: int, old: int, new: int):
    """Sign of swapping factor `old` for `new` in the sorted block, or
    None if `new` already occurs."""
    rest = mask & ~(1 << old)
    if rest & (1 << new):
        return None
    lo, hi = (old, new) if old < new else (new, old)
    between = bin(rest & (((1 << hi) - 1) & ~((1 << (lo + 1)) - 1))).count("1")
    return -1 if between & 1 else 1


def operator_EI(basis: ComplexBasis) -> ExactMatrix:
    """2 * sum over positive roots a of ad(E_{-a}) (x) ad(E_a), each
    factor acting as a degree-zero derivation on its block."""
    rs = basis.rs
    npos = len(rs.positive_roots)
    n = basis.dim
    ent = [[Fraction(0)] * n for _ in range(n)]
    for j, m in enumerate(basis.monomials):
        for a in range(npos):
            for beta in m.neg_indices:
                br1 = rs.bracket_mm(a, beta)
                if br1 is None:
                    continue
                k1, c1 = br1
                s1 = _replace_sign(m.neg, beta, k1)
                if s1 is None:
                    continue
                for gamma in m.pos_indices:
                    br2 = rs.bracket_pp(a, gamma)
                    if br2 is None:
                        continue
                    k2, c2 = br2
                    s2 = _replace_sign(m.pos, gamma, k2)
                    if s2 is None:
                        continue
                    tgt = BiMonomial(
                        (m.neg & ~(1 << beta)) | (1 << k1),
                        (m.pos & ~(1 << gamma)) | (1 << k2),
                    )
                    ent[basis.index[tgt]][j] += 2 * c1 * c2 * s1 * s2
    return ExactMatrix(ent)


def _gram_diag(basis: ComplexBasis):
    return [gram_weight(basis.rs, m) for m in basis.monomials]


def adjoint_wrt_gram(basis: ComplexBasis, m: ExactMatrix) -> ExactMatrix:
    """G^{-1} m^T G for the diagonal Gram of the monomial weights."""
    g = _gram_diag(basis)
    n = basis.dim
    return ExactMatrix(
        [[m[j, i] * g[j] / g[i] for j in range(n)] for i in range(n)]
    )


@dataclass
class HarmonicOperators:
    basis: ComplexBasis
    EI: ExactMatrix = None
    L: ExactMatrix = None
    L0: ExactMatrix = None
    S: ExactMatrix = None
    R: ExactMatrix = None
    L_eigen: list = field(default_factory=list)

    def __post_init__(self):
        basis = self.basis
        rs = basis.rs
        P = basis.matrix_partial()
        D = basis.matrix_d()
        delta = adjoint_wrt_gram(basis, P)
        self.L = P @ delta + delta @ P
        n = basis.dim
        # L must be diagonal with the norm-difference eigenvalue
        rho = rs.rho
        eig = []
        for k, m in enumerate(basis.monomials):
            shift = list(rho)
            for a in m.neg_indices:
                c = rs.positive_roots[a].coords
                shift = [x - y for x, y in zip(shift, c)]
            val = rs.killing_pair(rho, rho) - rs.killing_pair(shift, shift)
            eig.append(val)
            for i in range(n):
                want = val if i == k else Fraction(0)
                assert self.L[i, k] == want, (
                    "L is not diagonal with the expected eigenvalue",
                    m,
                )
        self.L_eigen = eig
        self.L0 = ExactMatrix(
            [
                [
                    (Fraction(1) / eig[i] if i == j and eig[i] != 0 else Fraction(0))
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )
        self.EI = operator_EI(basis)
        self.S = D @ P + P @ D
        self.R = (self.L0 @ self.EI).scale(Fraction(-1))


def build_operators(basis: ComplexBasis) -> HarmonicOperators:
    return HarmonicOperators(basis)


def greens_L0(ops: HarmonicOperators) -> ExactMatrix:
    return ops.L0


def operator_L(ops: HarmonicOperators) -> ExactMatrix:
    return ops.L


def laplacian_S(ops: HarmonicOperators) -> ExactMatrix:
    return ops.S


@dataclass
class HarmonicForm:
    w: object
    element: InvElement


def kostant_form(ops: HarmonicOperators, group, w) -> HarmonicForm:
    """s^w = (1 - R)^{-1} h^{w^{-1}} by the terminating Neumann series."""
    basis = ops.basis
    h = h_element(basis, group, w)
    ((mono, coeff),) = h.terms.items()
    n = basis.dim
    vec = [Fraction(0)] * n
    vec[basis.index[mono]] = Fraction(1)
    total = list(vec)
    cap = 2 * n
    steps = 0
    while any(vec):
        vec = ops.R.apply(vec)
        total = [a + b for a, b in zip(total, vec)]
        steps += 1
        if steps > cap:
            raise SeriesDiverged(
                f"Neumann series for {w!r} did not terminate in {cap} steps"
            )
    element = InvElement(
        {m: coeff * total[k] for k, m in enumerate(basis.monomials)}
    )
    return HarmonicForm(w=w, element=element)


def check_disjointness(basis: ComplexBasis) -> dict:
    """Exact-rank verification: im(d) and ker(kostant operator) meet
    only at zero, and symmetrically; im(S) = im(d) + im(kostant)."""
    P = basis.matrix_partial()
    D = basis.matrix_d()
    S = D @ P + P @ D
    n = basis.dim

    def cols_of(m):
        return [[m[i, j] for i in range(n)] for j in range(n)]

    def span_rank(vectors):
        if not vectors:
            return 0
        return mat_rank(ExactMatrix(list(zip(*vectors))))

    def intersection_dim(u_vectors, v_vectors):
        du, dv = span_rank(u_vectors), span_rank(v_vectors)
        dsum = span_rank(u_vectors + v_vectors)
        return du + dv - dsum

    im_d = cols_of(D)
    im_p = cols_of(P)
    ker_p = mat_kernel(P)
    ker_d = mat_kernel(D)
    r1 = intersection_dim(im_d, ker_p)
    r2 = intersection_dim(im_p, ker_d)
    rank_S = mat_rank(S)
    rank_sum = span_rank(im_d + im_p)
    return {
        "im_d_meets_ker_partial": r1,
        "im_partial_meets_ker_d": r2,
        "rank_S": rank_S,
        "rank_im_d_plus_im_partial": rank_sum,
        "disjoint": r1 == 0 and r2 == 0,
        "im_S_is_im_d_plus_im_partial": rank_S == rank_sum,
    }


#: the three equal-weight monomials whose span exhibits the nilpotent
#: part of S for sl(4): neg = pos = {a2, theta}, {a1+a2, theta},
#: {a2+a3, theta} in simple-root coordinates
_SL4_TRIPLE = [
    [(0, 1, 0), (1, 1, 1)],
    [(1, 1, 0), (1, 1, 1)],
    [(0, 1, 1), (1, 1, 1)],
]


def check_sl4_nonsemisimple(basis: ComplexBasis, ops: HarmonicOperators) -> dict:
    if str(basis.rs.type) != "A3":
        raise WrongType("the non-semisimplicity witness lives in A3")
    rs = basis.rs
    idxs = []
    for coords_pair in _SL4_TRIPLE:
        mask = 0
        for c in coords_pair:
            mask |= 1 << rs.index[c]
        idxs.append(basis.index[BiMonomial(mask, mask)])
    n = basis.dim

    def restrict(m):
        # columns of m on the three monomials, in their coordinates;
        # None if the span is not invariant
        out = []
        for j in idxs:
            col = [m[i, j] for i in range(n)]
            small = [col[i] for i in idxs]
            for i in range(n):
                if col[i] != 0 and i not in idxs:
                    return None
            out.append(small)
        return [list(row) for row in zip(*out)]

    S_r = restrict(ops.S)
    EI_r = restrict(ops.EI)
    L_scalars = [ops.L_eigen[i] for i in idxs]
    scalar_L = len(set(L_scalars)) == 1
    # strictly triangular in the (x, y, z) order; either orientation is
    # accepted since it flips with the row/column operator convention
    triangular = EI_r is not None and (
        all(EI_r[i][j] == 0 for i in range(3) for j in range(3) if i >= j)
        or all(EI_r[i][j] == 0 for i in range(3) for j in range(3) if i <= j)
    )
    nonzero = EI_r is not None and any(
        EI_r[i][j] != 0 for i in range(3) for j in range(3)
    )
    return {
        "span_S_invariant": S_r is not None,
        "L_scalar_on_span": scalar_L,
        "L_scalar": L_scalars[0],
        "nilpotent_part_strictly_triangular": triangular,
        "nilpotent_part_nonzero": nonzero,
        "not_semisimple": S_r is not None and scalar_L and triangular and nonzero,
    }


def harmonic_document(basis, group, forms) -> dict:
    return {
        "schema": "khf/1",
        "type": str(basis.rs.type),
        "forms": [
            {
                "w": [i + 1 for i in f.w.word],
                "length": f.w.length,
                "terms": [
                    {
                        "neg": list(m.neg_indices),
                        "pos": list(m.pos_indices),
                        "coeff": c.to_json(),
                    }
                    for m, c in f.element.sorted_terms()
                ],
            }
            for f in forms
        ],
    }
