"""Root systems with a Chevalley basis and exact Killing-form data.

The basis is normalized so that the pairing of a positive root vector
with its negative partner under the Killing form is exactly 1: we keep
the Chevalley vector for each positive root and divide the negative one
by g_alpha = killing(e_alpha, e_{-alpha}).  Every structure constant
stays rational this way.

Signs of the Chevalley structure constants follow the extraspecial-pair
convention for the canonical root order (height, then lexicographic on
simple-root coordinates).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction


class UnsupportedType(Exception):
    pass


_SUPPORTED = {
    ("A", 1), ("A", 2), ("A", 3), ("A", 4),
    ("B", 2), ("B", 3), ("C", 2), ("C", 3),
    ("D", 4), ("G", 2),
}


def max_rank() -> int:
    try:
        return int(os.environ.get("KHF_MAX_RANK", "4"))
    except ValueError:
        return 4


@dataclass(frozen=True)
class CartanType:
    family: str
    rank: int

    @staticmethod
    def parse(name: str) -> "CartanType":
        name = name.strip()
        if len(name) < 2 or name[0].upper() not in "ABCDEFG":
            raise UnsupportedType(f"cannot parse Cartan type {name!r}")
        try:
            rank = int(name[1:])
        except ValueError:
            raise UnsupportedType(f"cannot parse Cartan type {name!r}")
        return CartanType(name[0].upper(), rank)

    def validate(self) -> None:
        if (self.family, self.rank) not in _SUPPORTED:
            raise UnsupportedType(
                f"{self.family}{self.rank} is not a supported simple type "
                "(supported: A1-A4, B2, B3, C2, C3, D4, G2)"
            )
        if self.rank > max_rank():
            raise UnsupportedType(
                f"rank {self.rank} exceeds KHF_MAX_RANK={max_rank()}"
            )

    def __str__(self):
        return f"{self.family}{self.rank}"


def cartan_matrix(t: CartanType):
    """C[i][j] = <alpha_i, alpha_j-coroot>."""
    n = t.rank
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, cij=-1, cji=-1):
        C[i][j] = cij
        C[j][i] = cji

    if t.family == "A":
        for i in range(n - 1):
            link(i, i + 1)
    elif t.family == "B":
        # alpha_{n-1} short
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 2, n - 1, -2, -1)
    elif t.family == "C":
        # alpha_{n-1} long
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 2, n - 1, -1, -2)
    elif t.family == "D":
        for i in range(n - 3):
            link(i, i + 1)
        link(n - 3, n - 2)
        link(n - 3, n - 1)
    elif t.family == "G":
        link(0, 1, -1, -3)
    else:
        raise UnsupportedType(f"no Cartan matrix for family {t.family}")
    return C


@dataclass(frozen=True)
class Root:
    coords: tuple  # integer coefficients on simple roots
    height: int

    @staticmethod
    def of(coords) -> "Root":
        coords = tuple(coords)
        return Root(coords, sum(coords))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


@dataclass
class RootSystem:
    type: CartanType
    cartan: list  # C[i][j] = <alpha_i, alpha_j-coroot>
    positive_roots: list = field(default_factory=list)  # canonical order
    index: dict = field(default_factory=dict)  # coords -> index in positive_roots
    root_set: set = field(default_factory=set)  # coords of all roots
    sym: list = field(default_factory=list)  # W-invariant form on simple roots
    nspecial: dict = field(default_factory=dict)  # (coords,coords) -> int N
    g_weights: list = field(default_factory=list)  # g_alpha per positive root
    killing_dual: list = field(default_factory=list)  # <<alpha_i, alpha_j>>
    rho: tuple = ()  # simple-root coordinates of rho

    # -- basic queries ------------------------------------------------

    @property
    def rank(self) -> int:
        return self.type.rank

    def is_root(self, coords) -> bool:
        return tuple(coords) in self.root_set

    def is_positive(self, coords) -> bool:
        return tuple(coords) in self.index

    def sym_pair(self, a, b) -> Fraction:
        return sum(
            Fraction(ai) * self.sym[i][j] * Fraction(bj)
            for i, ai in enumerate(a)
            for j, bj in enumerate(b)
            if ai and bj
        ) or Fraction(0)

    def coroot_coords(self, coords):
        """Coordinates of the coroot of a root on the simple coroots."""
        n2 = self.sym_pair(coords, coords)
        out = []
        for i in range(self.rank):
            ei = [0] * self.rank
            ei[i] = 1
            out.append(Fraction(coords[i]) * self.sym_pair(ei, ei) / n2)
        assert all(c.denominator == 1 for c in out)
        return tuple(int(c) for c in out)

    def pairing_with_coroot(self, coords, i) -> int:
        """<beta, alpha_i-coroot> for beta given in simple coordinates."""
        return sum(coords[j] * self.cartan[j][i] for j in range(self.rank))

    # -- structure constants ------------------------------------------

    def _string_p(self, a, b) -> int:
        """max k with b - k*a a root (the 'down' length of the a-string)."""
        p = 0
        cur = _sub(b, a)
        while cur in self.root_set:
            p += 1
            cur = _sub(cur, a)
        return p

    def nconst(self, a, b) -> int:
        """Chevalley structure constant N_{a,b} for roots with a+b a root."""
        a, b = tuple(a), tuple(b)
        s = _add(a, b)
        if s not in self.root_set:
            raise ValueError("a+b is not a root")
        pa = a in self.index
        pb = b in self.index
        if pa and pb:
            if (a, b) in self.nspecial:
                return self.nspecial[(a, b)]
            return -self.nspecial[(b, a)]
        if not pa and not pb:
            return -self.nconst(_neg(a), _neg(b))
        # mixed signs: reduce to a positive pair via the cyclic identity
        if not pa:
            return -self.nconst(b, a)
        bp = _neg(b)  # positive
        diff = _sub(a, bp)  # = a + b, a root
        n2 = self.sym_pair
        if diff in self.index:
            # N_{a,-bp} = -(|a+b|^2/|a|^2) N_{bp, a-bp}
            return _exact_int(
                -Fraction(n2(diff, diff), n2(a, a)) * self.nconst(bp, diff)
            )
        # bp - a positive
        d2 = _neg(diff)
        return _exact_int(
            Fraction(n2(d2, d2), n2(bp, bp)) * self.nconst(d2, a)
        )

    # -- Killing data -------------------------------------------------

    def killing_pair(self, lam, mu) -> Fraction:
        """Killing-dual pairing of two weights in simple-root coordinates."""
        acc = Fraction(0)
        for i, li in enumerate(lam):
            if not li:
                continue
            for j, mj in enumerate(mu):
                if mj:
                    acc += Fraction(li) * self.killing_dual[i][j] * Fraction(mj)
        return acc

    def g_of(self, pos_index: int) -> Fraction:
        return self.g_weights[pos_index]

    # -- normalized basis brackets ------------------------------------
    # E_a = e_a for a > 0 and E_{-a} = e_{-a} / g_a.

    def bracket_pp(self, i: int, j: int):
        """[E_a, E_b] for positive roots #i, #j -> (index, coeff) or None."""
        a = self.positive_roots[i].coords
        b = self.positive_roots[j].coords
        s = _add(a, b)
        if s not in self.index:
            return None
        return self.index[s], Fraction(self.nconst(a, b))

    def bracket_mm(self, i: int, j: int):
        """[E_{-a}, E_{-b}] -> (index, coeff) on E_{-(a+b)} or None."""
        a = self.positive_roots[i].coords
        b = self.positive_roots[j].coords
        s = _add(a, b)
        if s not in self.index:
            return None
        k = self.index[s]
        coeff = (
            Fraction(self.nconst(_neg(a), _neg(b)))
            * self.g_weights[k]
            / (self.g_weights[i] * self.g_weights[j])
        )
        return k, coeff

    def bracket_pm(self, i: int, j: int):
        """[E_a, E_{-b}] for distinct positive roots #i, #j.

        Returns ('pos'|'neg', index, coeff) or None; the Cartan case
        i == j is not handled here.
        """
        a = self.positive_roots[i].coords
        b = self.positive_roots[j].coords
        if i == j:
            raise ValueError("Cartan-valued bracket")
        d = _sub(a, b)
        if d not in self.root_set:
            return None
        n = Fraction(self.nconst(a, _neg(b)))
        if d in self.index:
            return "pos", self.index[d], n / self.g_weights[j]
        k = self.index[_neg(d)]
        return "neg", k, n * self.g_weights[k] / self.g_weights[j]


def _exact_int(x: Fraction) -> int:
    assert x.denominator == 1, f"expected integer, got {x}"
    return int(x)


def build_root_system(t: CartanType) -> RootSystem:
    t.validate()
    C = cartan_matrix(t)
    n = t.rank
    rs = RootSystem(type=t, cartan=C)

    # W-invariant symmetric form on simple roots (overall scale irrelevant)
    d = [Fraction(0)] * n
    d[0] = Fraction(1)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if C[i][j] and d[i] and not d[j]:
                    # symmetry: C[i][j] d_j = C[j][i] d_i
                    d[j] = d[i] * Fraction(C[j][i], C[i][j])
                    changed = True
    rs.sym = [[d[j] * C[i][j] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            assert rs.sym[i][j] == rs.sym[j][i]

    # positive roots by closure, height by height
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    by_height = {1: set(simple)}
    all_pos = set(simple)
    h = 1
    while by_height.get(h):
        nxt = set()
        for a in by_height[h]:
            for i in range(n):
                # alpha_i-string through a: a + alpha_i is a root iff
                # p - <a, alpha_i-coroot> > 0
                p = 0
                cur = _sub(a, simple[i])
                while cur in all_pos:
                    p += 1
                    cur = _sub(cur, simple[i])
                m = sum(a[j] * C[j][i] for j in range(n))
                if p - m > 0:
                    nxt.add(_add(a, simple[i]))
        nxt -= all_pos
        if nxt:
            by_height[h + 1] = nxt
            all_pos |= nxt
        h += 1

    ordered = sorted(all_pos, key=lambda c: (sum(c), c))
    rs.positive_roots = [Root.of(c) for c in ordered]
    rs.index = {r.coords: i for i, r in enumerate(rs.positive_roots)}
    rs.root_set = set(ordered) | {_neg(c) for c in ordered}

    _fill_structure_constants(rs)

    # rho
    two_rho = [0] * n
    for r in rs.positive_roots:
        two_rho = [a + b for a, b in zip(two_rho, r.coords)]
    rs.rho = tuple(Fraction(x, 2) for x in two_rho)

    _fill_killing(rs)
    return rs


def _fill_structure_constants(rs: RootSystem) -> None:
    """Extraspecial-pair determination of the N_{a,b}, by height of a+b."""
    order = {r.coords: i for i, r in enumerate(rs.positive_roots)}
    n2 = rs.sym_pair
    for xi in rs.positive_roots:
        if xi.height < 2:
            continue
        s = xi.coords
        parts = [
            a.coords
            for a in rs.positive_roots
            if order[a.coords] < order.get(s, 10**9)
            and _sub(s, a.coords) in rs.index
        ]
        pairs = [
            (a, _sub(s, a))
            for a in parts
            if order[a] < order[_sub(s, a)]
        ]
        pairs.sort(key=lambda ab: order[ab[0]])
        a1, b1 = pairs[0]
        rs.nspecial[(a1, b1)] = rs._string_p(a1, b1) + 1
        for a, b in pairs[1:]:
            # Jacobi identity on the quadruple (a1, b1, -a, -b)
            acc = Fraction(0)
            t1 = _sub(b1, a)
            if t1 in rs.root_set and any(t1):
                acc += Fraction(
                    rs.nconst(b1, _neg(a)) * rs.nconst(a1, _neg(b)),
                    1,
                ) / n2(t1, t1)
            t2 = _sub(a1, a)
            if t2 in rs.root_set and any(t2):
                acc += Fraction(
                    rs.nconst(_neg(a), a1) * rs.nconst(b1, _neg(b)),
                    1,
                ) / n2(t2, t2)
            val = n2(s, s) * acc / rs.nspecial[(a1, b1)]
            nval = _exact_int(val)
            assert abs(nval) == rs._string_p(a, b) + 1, (a, b, nval)
            rs.nspecial[(a, b)] = nval


def adjoint_rep(rs: RootSystem):
    """Matrices of ad(basis) on the Chevalley basis, as integer rows.

    Basis order: e_gamma for gamma in (positives, then negatives, both in
    canonical order), then the simple coroots h_1..h_n.  Used as the
    oracle for Killing values and for the Jacobi checks.
    """
    n = rs.rank
    npos = len(rs.positive_roots)
    dim = 2 * npos + n
    gammas = [r.coords for r in rs.positive_roots] + [
        _neg(r.coords) for r in rs.positive_roots
    ]
    gidx = {g: i for i, g in enumerate(gammas)}

    def ad_of(idx):
        m = [[0] * dim for _ in range(dim)]
        if idx < 2 * npos:
            a = gammas[idx]
            for j, b in enumerate(gammas):
                s = _add(a, b)
                if s in gidx:
                    m[gidx[s]][j] = rs.nconst(a, b)
                elif not any(s):
                    # [e_a, e_{-a}] = coroot of a
                    cr = rs.coroot_coords(a)
                    for k in range(n):
                        m[2 * npos + k][j] = cr[k]
            for k in range(n):
                # [e_a, h_k] = -<a, alpha_k-coroot> e_a
                m[idx][2 * npos + k] = -rs.pairing_with_coroot(a, k)
        else:
            k = idx - 2 * npos
            for j, b in enumerate(gammas):
                m[j][j] = rs.pairing_with_coroot(b, k)
        return m

    return [ad_of(i) for i in range(dim)]


def _fill_killing(rs: RootSystem) -> None:
    n = rs.rank
    # kappa on the coroot basis of the Cartan: sum over roots of
    # gamma(h_i) gamma(h_j)
    B = [[0] * n for _ in range(n)]
    for r in rs.positive_roots:
        for i in range(n):
            vi = rs.pairing_with_coroot(r.coords, i)
            for j in range(n):
                B[i][j] += 2 * vi * rs.pairing_with_coroot(r.coords, j)
    from .linalg import ExactMatrix, mat_solve

    Bm = ExactMatrix([[Fraction(x) for x in row] for row in B])
    dual = []
    for j in range(n):
        rhs = [Fraction(rs.cartan[j][i]) for i in range(n)]
        dual.append(mat_solve(Bm, rhs))
    # <<alpha_i, alpha_j>> = alpha_i(t_j)
    rs.killing_dual = [
        [
            sum(dual[j][k] * rs.cartan[i][k] for k in range(n))
            for j in range(n)
        ]
        for i in range(n)
    ]
    for i in range(n):
        for j in range(n):
            assert rs.killing_dual[i][j] == rs.killing_dual[j][i]
    # g_alpha = kappa(e_a, e_{-a}) = 2 / <<a, a>>
    rs.g_weights = []
    for r in rs.positive_roots:
        norm = rs.killing_pair(r.coords, r.coords)
        assert norm > 0
        rs.g_weights.append(Fraction(2) / norm)


def roots_document(rs: RootSystem) -> dict:
    from .scalars import rat_str

    return {
        "schema": "khf/1",
        "type": str(rs.type),
        "positive_roots": [
            {"coords": list(r.coords), "height": r.height}
            for r in rs.positive_roots
        ],
        "rho_pairings": [
            rat_str(rs.killing_pair(rs.rho, r.coords))
            for r in rs.positive_roots
        ],
        "g_weights": [rat_str(g) for g in rs.g_weights],
    }
