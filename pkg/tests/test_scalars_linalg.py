from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from khf.linalg import (
    ExactMatrix,
    SingularMatrix,
    mat_inverse,
    mat_kernel,
    mat_rank,
    mat_solve,
    sparse_rank,
)
from khf.scalars import (
    GR_I,
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    Monomial,
    i_power,
    parse_rat,
    rat_str,
)

rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=20
)
gaussians = st.builds(GaussianRational.of, rationals, rationals)


@given(rationals)
def test_rat_str_round_trip(x):
    assert parse_rat(rat_str(x)) == x


def test_rat_str_integers_have_no_slash():
    assert rat_str(Fraction(-3)) == "-3"
    assert rat_str(Fraction(1, 2)) == "1/2"


@given(gaussians, gaussians, gaussians)
def test_gaussian_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    assert a * b == b * a


@given(gaussians)
def test_gaussian_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == GR_ONE


@given(gaussians)
def test_conjugate_gives_real_norm(a):
    n = a * a.conjugate()
    assert n.im == 0 and n.re >= 0


def test_i_power_cycles():
    assert [i_power(k) for k in range(4)] == [GR_ONE, GR_I, -GR_ONE, -GR_I]
    assert i_power(7) == i_power(-1) == i_power(3)


def test_monomial_product_adds_degrees():
    m = Monomial.of(Fraction(2), 3) * Monomial.of(Fraction(1, 2), 1)
    assert m.coeff == 1 and m.degree == 4
    assert Monomial.of(Fraction(5), 0).eval_at_zero() == 5
    assert Monomial.of(Fraction(5), 2).eval_at_zero() == 0


def test_monomial_json_shape():
    assert Monomial.of(Fraction(-1, 4), 1).to_json() == {"c": "-1/4", "deg": 1}
    assert GaussianRational.of(0, Fraction(1, 3)).to_json() == {
        "re": "0",
        "im": "1/3",
    }


def _mat(rows):
    return ExactMatrix([[Fraction(x) for x in r] for r in rows])


def test_inverse_and_solve():
    m = _mat([[2, 1], [1, 1]])
    inv = mat_inverse(m)
    assert m @ inv == ExactMatrix.identity(2)
    assert mat_solve(m, [Fraction(3), Fraction(2)]) == [Fraction(1), Fraction(1)]
    with pytest.raises(SingularMatrix):
        mat_inverse(_mat([[1, 2], [2, 4]]))


def test_kernel_is_annihilated():
    m = _mat([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    ker = mat_kernel(m)
    assert len(ker) == 3 - mat_rank(m)
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(
    st.lists(
        st.lists(st.integers(-3, 3), min_size=4, max_size=4),
        min_size=1,
        max_size=6,
    )
)
def test_sparse_rank_matches_dense(rows):
    dense = _mat(rows)
    sparse = [
        {j: Fraction(x) for j, x in enumerate(r) if x} for r in rows
    ]
    assert sparse_rank(sparse) == mat_rank(dense)


def test_matmul_respects_gaussian_entries():
    j = ExactMatrix([[GR_I, GR_ZERO], [GR_ZERO, -GR_I]])
    assert j @ j == ExactMatrix.identity(2, one=GR_ONE).scale(-GR_ONE)
