"""Weyl group combinatorics on simple-root coordinates.

Elements are the integer matrices of their action on the simple-root
basis.  Each element carries one fixed reduced word: the
lexicographically smallest among its shortest words, found by BFS from
the identity.  That choice makes every downstream enumeration (and
hence every serialized report) deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .roots import RootSystem


class GroupTooLarge(Exception):
    pass


#: generous default; the largest supported group is W(D4) with 192 elements
DEFAULT_MAX_ORDER = 1152


@dataclass(frozen=True)
class WeylElement:
    matrix: tuple  # rows, acting on column vectors of simple-root coords
    word: tuple  # canonical reduced word, simple-reflection indices
    index: int  # position in the canonical group order

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, coords):
        return tuple(
            sum(row[j] * coords[j] for j in range(len(coords)))
            for row in self.matrix
        )

    def __repr__(self):
        word = "".join(f"s{i + 1}" for i in self.word) or "e"
        return f"WeylElement({word})"


def _identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def simple_reflection_matrix(rs: RootSystem, i: int):
    """s_i(alpha_j) = alpha_j - <alpha_j, alpha_i-coroot> alpha_i."""
    n = rs.rank
    cols = []
    for j in range(n):
        col = [0] * n
        col[j] += 1
        col[i] -= rs.cartan[j][i]
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


class WeylGroup:
    def __init__(self, rs: RootSystem, max_order: int = DEFAULT_MAX_ORDER):
        self.rs = rs
        n = rs.rank
        refl = [simple_reflection_matrix(rs, i) for i in range(n)]
        ident = _identity_matrix(n)

        words = {ident: ()}
        frontier = [ident]
        while frontier:
            nxt = {}
            for m in sorted(frontier, key=lambda m: words[m]):
                for i in range(n):
                    prod = _mat_mul(m, refl[i])
                    if prod in words:
                        continue
                    cand = words[m] + (i,)
                    if prod not in nxt or cand < nxt[prod]:
                        nxt[prod] = cand
            words.update(nxt)
            if len(words) > max_order:
                raise GroupTooLarge(
                    f"Weyl group of {rs.type} exceeds {max_order} elements"
                )
            frontier = list(nxt)

        ordered = sorted(words.items(), key=lambda kv: (len(kv[1]), kv[1]))
        self.elements = [
            WeylElement(matrix=m, word=w, index=k)
            for k, (m, w) in enumerate(ordered)
        ]
        self._by_matrix = {e.matrix: e for e in self.elements}
        self._inverse = {}
        for e in self.elements:
            inv = _transport_inverse(e.matrix)
            self._inverse[e.index] = self._by_matrix[inv].index
        self._leq_cache = {}

    def __len__(self):
        return len(self.elements)

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    def by_word(self, word) -> WeylElement:
        m = _identity_matrix(self.rs.rank)
        for i in word:
            m = _mat_mul(m, simple_reflection_matrix(self.rs, i))
        return self._by_matrix[m]

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.elements[self._inverse[w.index]]

    def multiply(self, v: WeylElement, w: WeylElement) -> WeylElement:
        return self._by_matrix[_mat_mul(v.matrix, w.matrix)]

    def simple_reflection(self, i: int) -> WeylElement:
        return self.by_word((i,))

    def inversion_set(self, w: WeylElement):
        """{alpha > 0 : w^{-1} alpha < 0}, as positive-root indices."""
        winv = self.inverse(w)
        out = frozenset(
            k
            for k, r in enumerate(self.rs.positive_roots)
            if _is_negative(winv.act(r.coords))
        )
        assert len(out) == w.length
        return out

    def bruhat_leq(self, v: WeylElement, w: WeylElement) -> bool:
        """Subword criterion, by the standard lifting recursion."""
        key = (v.index, w.index)
        cached = self._leq_cache.get(key)
        if cached is not None:
            return cached
        if v.length > w.length:
            ans = False
        elif v.length == 0:
            ans = True
        else:
            s = self.simple_reflection(w.word[0])
            sw = self.multiply(s, w)
            sv = self.multiply(s, v)
            if sv.length < v.length:
                ans = self.bruhat_leq(sv, sw)
            else:
                ans = self.bruhat_leq(v, sw)
        self._leq_cache[key] = ans
        return ans

    def covers(self):
        """Bruhat cover pairs (v.index, w.index) with l(w) = l(v) + 1."""
        out = []
        for w in self.elements:
            for v in self.elements:
                if v.length == w.length - 1 and self.bruhat_leq(v, w):
                    out.append((v.index, w.index))
        return out

    def longest(self) -> WeylElement:
        return self.elements[-1]


def _transport_inverse(matrix):
    """Exact integer inverse of a Weyl-action matrix."""
    from fractions import Fraction

    from .linalg import ExactMatrix, mat_inverse

    n = len(matrix)
    inv = mat_inverse(
        ExactMatrix([[Fraction(x) for x in row] for row in matrix])
    )
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            x = inv[i, j]
            assert x.denominator == 1
            row.append(int(x))
        out.append(tuple(row))
    return tuple(out)


def _is_negative(coords) -> bool:
    return all(c <= 0 for c in coords) and any(c < 0 for c in coords)


def enumerate_weyl(rs: RootSystem, max_order: int = DEFAULT_MAX_ORDER) -> WeylGroup:
    return WeylGroup(rs, max_order=max_order)


def weyl_document(group: WeylGroup) -> dict:
    return {
        "schema": "khf/1",
        "type": str(group.rs.type),
        "order": len(group),
        "elements": [
            {"index": e.index, "word": [i + 1 for i in e.word], "length": e.length}
            for e in group.elements
        ],
        "bruhat_covers": [list(pair) for pair in group.covers()],
    }
