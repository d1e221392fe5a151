"""The invariant-form model: weight-zero exterior monomials and the
differential operators on them.

A basis monomial is a pair of subsets (A, B) of the positive roots with
equal weight sums, encoded as bitmasks; it stands for the invariant form
E_-(A) (x) E(B), with both factor blocks sorted by the canonical root
order (all negative-side factors before all positive-side ones).

The dual vector monomial is V(A, B) = (wedge of E_a, a in A) wedge
(wedge of E_{-b}, b in B); the determinant pairing of the form (A, B)
against V(A, B) is exactly 1 with both sides canonically sorted, so
vector-side elements are stored under the same (A, B) keys and the
pairing is a plain coefficient dot product.

Operators:
  * b is the Chevalley-Eilenberg boundary of the direct-sum algebra
    n_- (+) n_+ acting on form monomials; the Kostant operator is -b.
  * d is D_SIGN times the transpose of the relative boundary on vector
    monomials (all brackets taken in g, Cartan components dropped).
  * J is the scalar i^(p-q) on bidegree (p, q); conjugating the Kostant
    operator by J gives i*(its (-1,0) part) - i*(its (0,-1) part).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import ExactMatrix
from .roots import RootSystem
from .scalars import GR_I, GR_ONE, GR_ZERO, GaussianRational, i_power


class BasisTooLarge(Exception):
    pass


DEFAULT_MAX_DIM = 20000

#: Global sign of the coboundary relative to the transposed vector-side
#: boundary.  Pinned by the identity S = L + E_I (see the harmonic
#: operator tests); with the opposite sign S = -(L + E_I) instead.
D_SIGN = Fraction(1)


def _bits(mask: int):
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class BiMonomial:
    neg: int  # bitmask over positive-root indices, the E_-(A) block
    pos: int  # bitmask, the E(B) block

    @property
    def neg_indices(self):
        return _bits(self.neg)

    @property
    def pos_indices(self):
        return _bits(self.pos)

    @property
    def bidegree(self):
        return (_popcount(self.neg), _popcount(self.pos))

    @property
    def degree(self) -> int:
        return _popcount(self.neg) + _popcount(self.pos)

    def sort_key(self):
        return (self.degree, self.neg_indices, self.pos_indices)

    def __repr__(self):
        return f"BiMonomial(neg={self.neg_indices}, pos={self.pos_indices})"


class InvElement:
    """Sparse element of the model: BiMonomial -> GaussianRational."""

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for m, c in dict(terms).items():
                c = _gr(c)
                if not c.is_zero():
                    self.terms[m] = c

    @staticmethod
    def unit() -> "InvElement":
        return InvElement({BiMonomial(0, 0): GR_ONE})

    @staticmethod
    def monomial(m: BiMonomial, coeff=GR_ONE) -> "InvElement":
        return InvElement({m: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "InvElement") -> "InvElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc = out.get(m, GR_ZERO) + c
            if acc.is_zero():
                out.pop(m, None)
            else:
                out[m] = acc
        e = InvElement()
        e.terms = out
        return e

    def __sub__(self, other: "InvElement") -> "InvElement":
        return self + other.scale(-GR_ONE)

    def scale(self, c) -> "InvElement":
        c = _gr(c)
        if c.is_zero():
            return InvElement()
        return InvElement({m: x * c for m, x in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, InvElement) and self.terms == other.terms

    def sup_norm(self) -> Fraction:
        """Largest max(|re|, |im|) over the coefficients."""
        if not self.terms:
            return Fraction(0)
        return max(c.magnitude() for c in self.terms.values())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: mc[0].sort_key())

    def __repr__(self):
        if self.is_zero():
            return "InvElement(0)"
        parts = [f"{c!r}*{m!r}" for m, c in self.sorted_terms()]
        return "InvElement(" + " + ".join(parts) + ")"


def _gr(c) -> GaussianRational:
    if isinstance(c, GaussianRational):
        return c
    return GaussianRational.of(c)


def merge_sign(m1: BiMonomial, m2: BiMonomial):
    """Koszul sign of sorting the concatenation m1 then m2, or None on a
    repeated factor.  Factor order: neg block (ascending), pos block."""
    if (m1.neg & m2.neg) or (m1.pos & m2.pos):
        return None
    inv = 0
    q1 = _popcount(m1.pos)
    for a in m2.neg_indices:
        inv += _popcount(m1.neg >> (a + 1)) + q1
    for b in m2.pos_indices:
        inv += _popcount(m1.pos >> (b + 1))
    return -1 if inv & 1 else 1


def wedge(a: InvElement, b: InvElement) -> InvElement:
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            s = merge_sign(m1, m2)
            if s is None:
                continue
            m = BiMonomial(m1.neg | m2.neg, m1.pos | m2.pos)
            acc = out.get(m, GR_ZERO) + c1 * c2 * Fraction(s)
            if acc.is_zero():
                out.pop(m, None)
            else:
                out[m] = acc
    return InvElement(out)


class ComplexBasis:
    """All weight-zero subset pairs, in (degree, neg, pos) order."""

    def __init__(self, rs: RootSystem, max_dim: int = DEFAULT_MAX_DIM):
        self.rs = rs
        npos = len(rs.positive_roots)
        by_weight = {}
        for mask in range(1 << npos):
            w = _mask_weight(rs, mask)
            by_weight.setdefault(w, []).append(mask)
        monomials = []
        for masks in by_weight.values():
            for a in masks:
                for b in masks:
                    monomials.append(BiMonomial(a, b))
            if len(monomials) > max_dim:
                raise BasisTooLarge(
                    f"invariant complex of {rs.type} exceeds {max_dim} monomials"
                )
        monomials.sort(key=BiMonomial.sort_key)
        self.monomials = monomials
        self.index = {m: k for k, m in enumerate(monomials)}
        self._cache = {}

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def bigraded_dims(self):
        out = {}
        for m in self.monomials:
            out[m.bidegree] = out.get(m.bidegree, 0) + 1
        return out

    # -- element/vector conversions -----------------------------------

    def to_vector(self, x: InvElement):
        v = [GR_ZERO] * self.dim
        for m, c in x.terms.items():
            v[self.index[m]] = c
        return v

    def from_vector(self, v) -> InvElement:
        return InvElement(
            {m: v[k] for k, m in enumerate(self.monomials)}
        )

    def apply(self, matrix: ExactMatrix, x: InvElement) -> InvElement:
        return self.from_vector(matrix.apply(self.to_vector(x)))

    # -- operator matrices (rational ones cached as Fraction) ---------

    def _matrix(self, name, column_fn):
        if name not in self._cache:
            cols = [column_fn(m) for m in self.monomials]
            n = self.dim
            ent = [[Fraction(0)] * n for _ in range(n)]
            for j, col in enumerate(cols):
                for i, c in col.items():
                    ent[i][j] = c
            self._cache[name] = ExactMatrix(ent)
        return self._cache[name]

    def matrix_partial1(self) -> ExactMatrix:
        """(-1, 0) part of the Kostant operator (neg-block merges)."""
        return self._matrix(
            "partial1", lambda m: _neg_dict(_form_boundary(self, m, "neg"))
        )

    def matrix_partial2(self) -> ExactMatrix:
        """(0, -1) part of the Kostant operator (pos-block merges)."""
        return self._matrix(
            "partial2", lambda m: _neg_dict(_form_boundary(self, m, "pos"))
        )

    def matrix_partial(self) -> ExactMatrix:
        return self._cached_sum("partial", self.matrix_partial1, self.matrix_partial2)

    def matrix_boundary_b(self) -> ExactMatrix:
        if "b" not in self._cache:
            self._cache["b"] = self.matrix_partial().scale(Fraction(-1))
        return self._cache["b"]

    def matrix_d1(self) -> ExactMatrix:
        """(+1, 0) part of the coboundary (transposed vector-side part)."""
        if "d1" not in self._cache:
            bv = self._matrix(
                "bv1", lambda m: _vector_boundary(self, m, "neg")
            )
            self._cache["d1"] = bv.transpose().scale(D_SIGN)
        return self._cache["d1"]

    def matrix_d2(self) -> ExactMatrix:
        """(0, +1) part of the coboundary."""
        if "d2" not in self._cache:
            bv = self._matrix(
                "bv2", lambda m: _vector_boundary(self, m, "pos")
            )
            self._cache["d2"] = bv.transpose().scale(D_SIGN)
        return self._cache["d2"]

    def matrix_d(self) -> ExactMatrix:
        return self._cached_sum("d", self.matrix_d1, self.matrix_d2)

    def _cached_sum(self, name, f1, f2):
        if name not in self._cache:
            self._cache[name] = f1() + f2()
        return self._cache[name]

    def matrix_partial_infty(self) -> ExactMatrix:
        """i * partial1 - i * partial2, over Gaussian rationals."""
        if "pinf" not in self._cache:
            p1, p2 = self.matrix_partial1(), self.matrix_partial2()
            n = self.dim
            self._cache["pinf"] = ExactMatrix(
                [
                    [
                        GR_I * (p1[i, j] - p2[i, j])
                        for j in range(n)
                    ]
                    for i in range(n)
                ]
            )
        return self._cache["pinf"]

    def complexify(self, m: ExactMatrix) -> ExactMatrix:
        return ExactMatrix(
            [[_gr(x) for x in row] for row in m.entries]
        )


def _mask_weight(rs: RootSystem, mask: int):
    n = rs.rank
    acc = [0] * n
    k = 0
    while mask:
        if mask & 1:
            c = rs.positive_roots[k].coords
            acc = [x + y for x, y in zip(acc, c)]
        mask >>= 1
        k += 1
    return tuple(acc)


def _neg_dict(d):
    return {k: -v for k, v in d.items()}


def _ce_terms(factors, bracket_fn):
    """One Chevalley-Eilenberg sum: for factors x_1 < ... < x_k return
    the terms (-1)^(i+j) [x_i, x_j] ^ (rest), as factor-tuple -> coeff."""
    out = {}
    k = len(factors)
    for i in range(k):
        for j in range(i + 1, k):
            prods = bracket_fn(factors[i], factors[j])
            if not prods:
                continue
            rest = tuple(f for t, f in enumerate(factors) if t not in (i, j))
            base = Fraction(-1) if (i + j) & 1 else Fraction(1)  # (-1)^(i+j), 1-based
            for fac, coeff in prods:
                if fac in rest:
                    continue
                pos = sum(1 for f in rest if f < fac)
                sign = -1 if pos & 1 else 1
                new = tuple(sorted(rest + (fac,)))
                acc = out.get(new, Fraction(0)) + base * coeff * sign
                if acc == 0:
                    out.pop(new, None)
                else:
                    out[new] = acc
    return out


def _form_boundary(basis: ComplexBasis, m: BiMonomial, side: str):
    """Direct-sum boundary on the form monomial, one side at a time.

    Form factor order: (0, a) for E_{-a}, then (1, b) for E_b.
    """
    rs = basis.rs
    factors = tuple((0, a) for a in m.neg_indices) + tuple(
        (1, b) for b in m.pos_indices
    )
    want = 0 if side == "neg" else 1

    def bracket(f1, f2):
        (s1, i1), (s2, i2) = f1, f2
        if s1 != s2 or s1 != want:
            return []
        br = rs.bracket_mm(i1, i2) if s1 == 0 else rs.bracket_pp(i1, i2)
        if br is None:
            return []
        k, c = br
        return [((s1, k), c)]

    return _factor_terms_to_index(basis, _ce_terms(factors, bracket))


def _vector_boundary(basis: ComplexBasis, m: BiMonomial, side: str):
    """Relative boundary on the vector monomial V(A, B) dual to m.

    Vector factor order: (0, a) for E_a (a in A = m.neg mask), then
    (1, b) for E_{-b} (b in B = m.pos mask).  Cross brackets keep only
    their root-space component; side="neg" keeps the terms shrinking the
    A block, side="pos" those shrinking the B block.
    """
    rs = basis.rs
    factors = tuple((0, a) for a in m.neg_indices) + tuple(
        (1, b) for b in m.pos_indices
    )
    want = 0 if side == "neg" else 1

    def bracket(f1, f2):
        (s1, i1), (s2, i2) = f1, f2
        if s1 == s2:
            if s1 != want:
                return []
            br = rs.bracket_pp(i1, i2) if s1 == 0 else rs.bracket_mm(i1, i2)
            if br is None:
                return []
            k, c = br
            return [((s1, k), c)]
        # cross bracket [E_a, E_{-b}]; Cartan part dropped
        a, b = (i1, i2) if s1 == 0 else (i2, i1)
        if a == b:
            return []
        br = rs.bracket_pm(a, b)
        if br is None:
            return []
        kind, k, c = br
        if s1 == 1:
            c = -c  # factors met as (E_{-b}, E_a)
        tgt = 0 if kind == "pos" else 1
        if tgt == want:
            return []  # this term belongs to the other side's part
        if want == 0 and tgt == 1:
            # A block shrinks only when the result lands in the neg block
            return [((1, k), c)]
        if want == 1 and tgt == 0:
            return [((0, k), c)]
        return []

    return _factor_terms_to_index(basis, _ce_terms(factors, bracket))


def _factor_terms_to_index(basis: ComplexBasis, terms):
    out = {}
    for factors, coeff in terms.items():
        neg = pos = 0
        for s, i in factors:
            if s == 0:
                neg |= 1 << i
            else:
                pos |= 1 << i
        idx = basis.index[BiMonomial(neg, pos)]
        out[idx] = out.get(idx, Fraction(0)) + coeff
    return {k: v for k, v in out.items() if v != 0}


# -- element-level operator API ---------------------------------------


def enumerate_basis(rs: RootSystem, max_dim: int = DEFAULT_MAX_DIM) -> ComplexBasis:
    return ComplexBasis(rs, max_dim=max_dim)


def boundary_b(basis: ComplexBasis, x: InvElement) -> InvElement:
    return basis.apply(basis.complexify(basis.matrix_boundary_b()), x)


def kostant_partial(basis: ComplexBasis, x: InvElement) -> InvElement:
    return basis.apply(basis.complexify(basis.matrix_partial()), x)


def coboundary_d(basis: ComplexBasis, x: InvElement) -> InvElement:
    return basis.apply(basis.complexify(basis.matrix_d()), x)


def operator_J(x: InvElement) -> InvElement:
    return InvElement(
        {
            m: c * i_power(m.bidegree[0] - m.bidegree[1])
            for m, c in x.terms.items()
        }
    )


def partial_infty(basis: ComplexBasis, x: InvElement) -> InvElement:
    return basis.apply(basis.matrix_partial_infty(), x)


def pairing(form: InvElement, vector: InvElement) -> GaussianRational:
    """Determinant pairing; vector-side elements are keyed by the dual
    form monomial, so this is a coefficient dot product."""
    acc = GR_ZERO
    small, big = form.terms, vector.terms
    if len(big) < len(small):
        small, big = big, small
    for m, c in small.items():
        other = big.get(m)
        if other is not None:
            acc = acc + c * other
    return acc


def pi_power_at(rs: RootSystem, group, w, l: int) -> InvElement:
    """Model element of (pi-infinity at the point w)^l / l!.

    The bivector at w is -i * sum over b in Phi_{w^{-1}} of E_b ^ E_{-b};
    its l-th divided power is the sum over l-subsets T of Phi_{w^{-1}}
    of (-i)^l (-1)^(l(l-1)/2) V(T, T).
    """
    if l < 0:
        raise ValueError("negative power")
    roots = sorted(group.inversion_set(group.inverse(w)))
    if l > len(roots):
        return InvElement()
    import itertools

    coeff = i_power(-l) * Fraction((-1) ** (l * (l - 1) // 2))
    out = {}
    for subset in itertools.combinations(roots, l):
        mask = 0
        for k in subset:
            mask |= 1 << k
        out[BiMonomial(mask, mask)] = coeff
    return InvElement(out)


def gram_weight(rs: RootSystem, m: BiMonomial) -> Fraction:
    acc = Fraction(1)
    for b in m.pos_indices:
        acc *= rs.g_weights[b]
    for a in m.neg_indices:
        acc /= rs.g_weights[a]
    return acc


def sparse_d_columns(basis: ComplexBasis):
    """Columns of the coboundary as dicts {row: coeff}, built without
    materializing the dense matrix (large ranks need this)."""
    cols = [dict() for _ in range(basis.dim)]
    for j, m in enumerate(basis.monomials):
        merged = _vector_boundary(basis, m, "neg")
        for i, c in _vector_boundary(basis, m, "pos").items():
            merged[i] = merged.get(i, Fraction(0)) + c
        for i, c in merged.items():
            if c:
                cols[i][j] = D_SIGN * c
    return cols


def betti_numbers(basis: ComplexBasis):
    """dim ker(d)/im(d) per total degree, by exact sparse ranks."""
    from .linalg import sparse_rank

    cols = sparse_d_columns(basis)
    by_degree = {}
    for k, m in enumerate(basis.monomials):
        by_degree.setdefault(m.degree, []).append(k)
    maxdeg = max(by_degree)
    ranks = {}
    for deg in range(maxdeg + 1):
        src = by_degree.get(deg, [])
        tgt = set(by_degree.get(deg + 1, []))
        pos = {j: t for t, j in enumerate(src)}
        rows = {}
        for j in src:
            for i, c in cols[j].items():
                assert i in tgt
                rows.setdefault(i, {})[pos[j]] = c
        ranks[deg] = sparse_rank(list(rows.values()))
    return [
        len(by_degree.get(deg, [])) - ranks.get(deg, 0) - ranks.get(deg - 1, 0)
        for deg in range(maxdeg + 1)
    ]


def complex_document(basis: ComplexBasis, betti=None) -> dict:
    table = sorted(basis.bigraded_dims().items())
    doc = {
        "schema": "khf/1",
        "type": str(basis.rs.type),
        "dimension": basis.dim,
        "bigraded_dimensions": [
            {"p": p, "q": q, "dim": d} for (p, q), d in table
        ],
    }
    if betti is not None:
        doc["betti"] = betti
    return doc
