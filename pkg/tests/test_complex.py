from collections import Counter

import pytest

from khf.harmonic import h_element
from khf.invcomplex import (
    BasisTooLarge,
    betti_numbers,
    complex_document,
    enumerate_basis,
    operator_J,
    pairing,
    pi_power_at,
)
from khf.linalg import ExactMatrix
from conftest import basis, group, system

DIMS = {"A1": 2, "A2": 10, "B2": 24, "G2": 172, "A3": 152}


def _zero(m: ExactMatrix) -> bool:
    return all(
        x.is_zero() if hasattr(x, "is_zero") else not x
        for row in m.entries
        for x in row
    )


@pytest.mark.parametrize("name", sorted(DIMS))
def test_total_dimension(name):
    assert basis(name).dim == DIMS[name]


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
def test_squares_and_anticommutators_vanish(name):
    b = basis(name)
    d = b.matrix_d()
    p = b.matrix_partial()
    pinf = b.matrix_partial_infty()
    dc = b.complexify(d)
    assert _zero(d @ d)
    assert _zero(p @ p)
    assert _zero(pinf @ pinf)
    assert _zero(dc @ pinf + pinf @ dc)


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_split_pieces_anticommute_in_matched_pairs(name):
    b = basis(name)
    d1, d2 = b.matrix_d1(), b.matrix_d2()
    p1, p2 = b.matrix_partial1(), b.matrix_partial2()
    assert _zero(d1 @ p2 + p2 @ d1)
    assert _zero(d2 @ p1 + p1 @ d2)
    assert d1 @ p1 + p1 @ d1 == d2 @ p2 + p2 @ d2


@pytest.mark.slow
def test_squares_vanish_a3():
    b = basis("A3")
    d = b.matrix_d()
    p = b.matrix_partial()
    pinf = b.matrix_partial_infty()
    dc = b.complexify(d)
    assert _zero(d @ d) and _zero(p @ p)
    assert _zero(pinf @ pinf)
    assert _zero(dc @ pinf + pinf @ dc)


def _length_counts(name):
    return Counter(w.length for w in group(name).elements)


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "C2", "G2", "A3"])
def test_betti_numbers_count_weyl_lengths(name):
    counts = _length_counts(name)
    betti = betti_numbers(basis(name))
    for deg, b_deg in enumerate(betti):
        if deg % 2:
            assert b_deg == 0
        else:
            assert b_deg == counts.get(deg // 2, 0)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["B3", "C3", "A4"])
def test_betti_numbers_large_types(name):
    counts = _length_counts(name)
    betti = betti_numbers(basis(name))
    for deg, b_deg in enumerate(betti):
        expected = 0 if deg % 2 else counts.get(deg // 2, 0)
        assert b_deg == expected


def test_dimension_guard():
    with pytest.raises(BasisTooLarge):
        enumerate_basis(system("D4"))


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_bigraded_table_symmetric(name):
    dims = basis(name).bigraded_dims()
    assert dims == {(q, p): v for (p, q), v in dims.items()}


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_delta_pairing_on_equal_lengths(name):
    b, g = basis(name), group(name)
    for w1 in g.elements:
        form = operator_J(h_element(b, g, w1))
        for w in g.elements:
            if w.length != w1.length:
                continue
            val = pairing(form, pi_power_at(b.rs, g, w, w.length))
            expected = 1 if w is w1 else 0
            assert val.re == expected and val.im == 0


def test_document_shape():
    doc = complex_document(basis("A2"), betti=betti_numbers(basis("A2")))
    assert doc["schema"] == "khf/1"
    assert doc["dimension"] == 10
    assert doc["betti"] == [1, 0, 2, 0, 2, 0, 1]
