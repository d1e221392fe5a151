"""Exact dense linear algebra over Q or Q(i).

Everything runs by exact Gaussian elimination with the deterministic
pivot rule "first nonzero entry in fixed column order".  Matrices are
immutable once constructed; operations return fresh objects.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import GaussianRational


class SingularMatrix(Exception):
    pass


class Inconsistent(Exception):
    pass


def _is_zero(x) -> bool:
    if isinstance(x, GaussianRational):
        return x.is_zero()
    return x == 0


def _inv(x):
    if isinstance(x, GaussianRational):
        return x.inverse()
    return Fraction(1) / x


class ExactMatrix:
    """Dense matrix over Fraction or GaussianRational entries."""

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    @staticmethod
    def identity(n: int, one=Fraction(1)) -> "ExactMatrix":
        zero = one - one
        return ExactMatrix(
            [[one if i == j else zero for j in range(n)] for i in range(n)]
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                _is_zero(self.entries[i][j] - other.entries[i][j])
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        # accumulate by rows, skipping zero entries (operators here are
        # typically very sparse)
        out = []
        for row in self.entries:
            acc = None
            for k, x in enumerate(row):
                if _is_zero(x):
                    continue
                brow = other.entries[k]
                if acc is None:
                    acc = [x * y for y in brow]
                else:
                    for j, y in enumerate(brow):
                        if not _is_zero(y):
                            acc[j] = acc[j] + x * y
            if acc is None:
                zero = row[0] - row[0] if row else Fraction(0)
                acc = [zero] * other.cols
            out.append(acc)
        return ExactMatrix(out)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix([[c * x for x in row] for row in self.entries])

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.entries)))

    def apply(self, vec):
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum_prod(row, vec) for row in self.entries]


def sum_prod(xs, ys):
    it = iter(x * y for x, y in zip(xs, ys))
    acc = next(it)
    for t in it:
        acc = acc + t
    return acc


def _rref(m: ExactMatrix):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    a = [list(row) for row in m.entries]
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if not _is_zero(a[i][c])), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = _inv(a[r][c])
        a[r] = [inv * x for x in a[r]]
        for i in range(nrows):
            if i != r and not _is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def mat_rank(m: ExactMatrix) -> int:
    return len(_rref(m)[1])


def sparse_rank(rows) -> int:
    """Exact rank of a sparse matrix given as dicts {column: value}.

    Pivots are chosen to keep fill-in low (sparsest available row, then
    its least-popular column); with exact rational arithmetic the result
    is the true rank regardless of pivot order.
    """
    try:
        from gmpy2 import mpq
    except ImportError:  # pragma: no cover - gmpy2 is a hard speedup, not a need
        mpq = Fraction
    active = {}
    for k, row in enumerate(rows):
        live = {c: mpq(v.numerator, v.denominator) for c, v in row.items() if v != 0}
        if live:
            active[k] = live
    col_rows = {}
    for k, row in active.items():
        for c in row:
            col_rows.setdefault(c, set()).add(k)
    rank = 0
    while active:
        r = min(active, key=lambda k: (len(active[k]), k))
        row = active.pop(r)
        c = min(row, key=lambda col: (len(col_rows[col]), col))
        inv = 1 / row[c]
        row = {col: v * inv for col, v in row.items()}
        for col in row:
            col_rows[col].discard(r)
        for s in list(col_rows[c]):
            other = active[s]
            f = other.pop(c)
            col_rows[c].discard(s)
            for col, v in row.items():
                if col == c:
                    continue
                acc = other.get(col, 0) - f * v
                if acc == 0:
                    if col in other:
                        del other[col]
                        col_rows[col].discard(s)
                else:
                    if col not in other:
                        col_rows[col].add(s)
                    other[col] = acc
            if not other:
                del active[s]
        rank += 1
    return rank


def mat_kernel(m: ExactMatrix):
    """Exact basis of the null space, one vector per free column."""
    a, pivots = _rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    zero = None
    if m.rows and m.cols:
        zero = m.entries[0][0] - m.entries[0][0]
        one = _guess_one(m.entries[0][0])
    else:
        zero, one = Fraction(0), Fraction(1)
    basis = []
    for fc in free:
        v = [zero] * m.cols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(v)
    return basis


def _guess_one(sample):
    if isinstance(sample, GaussianRational):
        from .scalars import GR_ONE

        return GR_ONE
    return Fraction(1)


def mat_inverse(m: ExactMatrix) -> ExactMatrix:
    if m.rows != m.cols:
        raise SingularMatrix("inverse of non-square matrix")
    n = m.rows
    one = _guess_one(m.entries[0][0]) if n else Fraction(1)
    aug = ExactMatrix(
        [
            list(m.entries[i]) + list(ExactMatrix.identity(n, one).entries[i])
            for i in range(n)
        ]
    )
    a, pivots = _rref(aug)
    if pivots[: n if len(pivots) >= n else len(pivots)] != list(range(n)):
        raise SingularMatrix("matrix is rank-deficient")
    return ExactMatrix([row[n:] for row in a[:n]])


def mat_solve(m: ExactMatrix, rhs):
    """One exact solution of m x = rhs, or raise Inconsistent."""
    if len(rhs) != m.rows:
        raise ValueError("dimension mismatch")
    aug = ExactMatrix(
        [list(m.entries[i]) + [rhs[i]] for i in range(m.rows)]
    )
    a, pivots = _rref(aug)
    if m.cols in pivots:
        raise Inconsistent("rhs is outside the column span")
    zero = rhs[0] - rhs[0] if rhs else Fraction(0)
    x = [zero] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = a[r][m.cols]
    return x
