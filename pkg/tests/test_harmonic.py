from fractions import Fraction

import pytest

from khf.harmonic import (
    WrongType,
    check_disjointness,
    check_sl4_nonsemisimple,
    h_element,
    harmonic_document,
    kostant_form,
)
from khf.invcomplex import (
    coboundary_d,
    kostant_partial,
    partial_infty,
)
from khf.linalg import mat_kernel, mat_rank
from conftest import basis, group, operators

FAST = ["A1", "A2", "B2"]


@pytest.mark.parametrize("name", FAST)
def test_total_laplacian_splits(name):
    ops = operators(name)
    assert ops.S == ops.L + ops.EI


@pytest.mark.parametrize("name", FAST + ["G2"])
def test_kernel_of_S_has_weyl_order_dimension(name):
    ops = operators(name)
    assert len(mat_kernel(ops.S)) == len(group(name))


@pytest.mark.parametrize("name", FAST)
def test_kernel_meets_image_trivially(name):
    ops = operators(name)
    n = ops.basis.dim
    k = len(mat_kernel(ops.S))
    r = mat_rank(ops.S)
    assert k + r == n  # exact complement, so the two spans are disjoint


@pytest.mark.parametrize("name", FAST)
def test_L_vanishes_exactly_on_inversion_monomials(name):
    ops = operators(name)
    g = group(name)
    inversion_sets = set()
    for w in g.elements:
        mask = 0
        for k in g.inversion_set(w):
            mask |= 1 << k
        inversion_sets.add(mask)
    for k, m in enumerate(ops.basis.monomials):
        expect_zero = m.neg in inversion_sets
        assert (ops.L_eigen[k] == 0) == expect_zero


@pytest.mark.parametrize("name", FAST + ["G2"])
def test_forms_are_harmonic_with_leading_term(name):
    ops = operators(name)
    b, g = ops.basis, group(name)
    for w in g.elements:
        s = kostant_form(ops, g, w).element
        assert coboundary_d(b, s).is_zero()
        assert kostant_partial(b, s).is_zero()
        assert partial_infty(b, s).is_zero()
        lead = h_element(b, g, w)
        ((mono, coeff),) = lead.terms.items()
        assert s.terms.get(mono) == coeff
        length = w.length
        for m in s.terms:
            assert m.bidegree == (length, length)


@pytest.mark.parametrize("name", FAST)
def test_images_of_d_and_partial_are_disjoint(name):
    report = check_disjointness(basis(name))
    assert report["im_d_meets_ker_partial"] == 0
    assert report["im_partial_meets_ker_d"] == 0


def test_sl4_witness_requires_a3():
    with pytest.raises(WrongType):
        check_sl4_nonsemisimple(basis("A2"), operators("A2"))


@pytest.mark.slow
def test_sl4_nonsemisimple_witness():
    report = check_sl4_nonsemisimple(basis("A3"), operators("A3"))
    assert report["span_S_invariant"]
    assert report["L_scalar_on_span"]
    assert report["L_scalar"] == Fraction(1, 2)
    assert report["nilpotent_part_strictly_triangular"]
    assert report["nilpotent_part_nonzero"]
    assert report["not_semisimple"]


def test_document_round_trip_shape():
    g = group("A2")
    ops = operators("A2")
    forms = [kostant_form(ops, g, w) for w in g.elements]
    doc = harmonic_document(ops.basis, g, forms)
    assert doc["schema"] == "khf/1"
    assert len(doc["forms"]) == 6
    top = max(doc["forms"], key=lambda f: f["length"])
    assert top["length"] == 3 and top["terms"]
