from fractions import Fraction

import pytest

from khf.roots import (
    CartanType,
    UnsupportedType,
    adjoint_rep,
    build_root_system,
    roots_document,
)
from conftest import system

COUNTS = {
    "A1": 1, "A2": 3, "A3": 6, "A4": 10,
    "B2": 4, "C2": 4, "B3": 9, "C3": 9,
    "D4": 12, "G2": 6,
}

ALL_TYPES = sorted(COUNTS)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_positive_root_count(name):
    assert len(system(name).positive_roots) == COUNTS[name]


@pytest.mark.parametrize("bad", ["E6", "F4", "A9", "B1", "X2", "q", "A0"])
def test_unsupported_types_rejected(bad):
    with pytest.raises(UnsupportedType):
        build_root_system(CartanType.parse(bad))


@pytest.mark.parametrize("name", ["A2", "B2", "C3", "D4", "G2"])
def test_adjoint_satisfies_jacobi(name):
    # adjoint_rep raises if any bracket violates the Jacobi identity
    # or disagrees with the stored structure constants.
    adjoint_rep(system(name))


@pytest.mark.parametrize("name", ALL_TYPES)
def test_killing_normalization_positive(name):
    rs = system(name)
    for i in range(len(rs.positive_roots)):
        assert rs.g_of(i) > 0


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_structure_constant_magnitude_is_string_length(name):
    rs = system(name)
    for a in rs.positive_roots:
        for b in rs.positive_roots:
            s = tuple(x + y for x, y in zip(a.coords, b.coords))
            if a.coords == b.coords or not rs.is_root(s):
                continue
            n = rs.nconst(a.coords, b.coords)
            assert abs(n) == rs._string_p(a.coords, b.coords) + 1


def test_antisymmetry_of_constants():
    rs = system("G2")
    for a in rs.positive_roots:
        for b in rs.positive_roots:
            s = tuple(x + y for x, y in zip(a.coords, b.coords))
            if a.coords == b.coords or not rs.is_root(s):
                continue
            assert rs.nconst(a.coords, b.coords) == -rs.nconst(
                b.coords, a.coords
            )


@pytest.mark.parametrize("name", ["A3", "B3", "G2"])
def test_rho_pairs_to_one_with_simple_coroots(name):
    rs = system(name)
    for i in range(rs.rank):
        simple = tuple(1 if j == i else 0 for j in range(rs.rank))
        assert (
            Fraction(2) * rs.sym_pair(rs.rho, simple)
            / rs.sym_pair(simple, simple)
            == 1
        )


def test_document_shape():
    doc = roots_document(system("B2"))
    assert doc["schema"] == "khf/1"
    assert doc["type"] == "B2"
    assert len(doc["positive_roots"]) == 4
    assert all(isinstance(p, str) for p in doc["rho_pairings"])
