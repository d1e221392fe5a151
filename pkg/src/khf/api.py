"""Shared handler layer: one function per top-level verb, returning
plain JSON-ready dicts.  The CLI calls these in-process; the HTTP
service wraps the same functions behind pydantic models."""

from __future__ import annotations

from fractions import Fraction

from . import verify as verify_mod
from .equivariant import (
    build_dmatrix,
    dmatrix_document,
    schubert_document,
    structure_constants,
)
from .harmonic import build_operators, harmonic_document, kostant_form
from .hodgefamily import DeformParams, HodgeSolver, certify_limits
from .invcomplex import betti_numbers, complex_document, enumerate_basis
from .roots import CartanType, RootSystem, build_root_system, roots_document
from .weyl import enumerate_weyl, weyl_document

#: complexes above this dimension are too large for exact Betti ranks
BETTI_DIM_LIMIT = 8000


def _system(type_name: str) -> RootSystem:
    return build_root_system(CartanType.parse(type_name))


def roots(type_name: str) -> dict:
    return roots_document(_system(type_name))


def weyl(type_name: str) -> dict:
    return weyl_document(enumerate_weyl(_system(type_name)))


def complex_summary(type_name: str) -> dict:
    rs = _system(type_name)
    basis = enumerate_basis(rs)
    betti = betti_numbers(basis) if basis.dim <= BETTI_DIM_LIMIT else None
    return complex_document(basis, betti=betti)


def harmonic(type_name: str, words=None) -> dict:
    rs = _system(type_name)
    basis = enumerate_basis(rs)
    group = enumerate_weyl(rs)
    ops = build_operators(basis)
    if words:
        chosen = [group.by_word(tuple(i - 1 for i in word)) for word in words]
    else:
        chosen = group.elements
    forms = [kostant_form(ops, group, w) for w in chosen]
    return harmonic_document(basis, group, forms)


def dmatrix(type_name: str) -> dict:
    rs = _system(type_name)
    basis = enumerate_basis(rs)
    group = enumerate_weyl(rs)
    ops = build_operators(basis)
    return dmatrix_document(build_dmatrix(ops, group))


def schubert(type_name: str, at_zero: bool = False) -> dict:
    rs = _system(type_name)
    basis = enumerate_basis(rs)
    group = enumerate_weyl(rs)
    ops = build_operators(basis)
    sc = structure_constants(build_dmatrix(ops, group))
    return schubert_document(sc, at_zero=at_zero)


def hodge_limit(
    type_name: str,
    steps: int = 8,
    base_ratio: Fraction = Fraction(2),
    x_overrides=None,
) -> dict:
    rs = _system(type_name)
    basis = enumerate_basis(rs)
    group = enumerate_weyl(rs)
    ops = build_operators(basis)
    solver = HodgeSolver(ops)
    x = [Fraction(4)] * rs.rank
    for i, v in (x_overrides or {}).items():
        x[i] = Fraction(v)
    report = certify_limits(
        solver, group, DeformParams.of(x), steps=steps, ratio=base_ratio
    )
    return report.to_json()


def verify(type_name: str, suite: str = "all") -> dict:
    return verify_mod.verify_suite(_system(type_name), suite).to_json()
