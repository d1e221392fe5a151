"""Shared cached builders so expensive objects are constructed once per
session regardless of which test module asks first."""

from functools import lru_cache

from khf.harmonic import build_operators
from khf.invcomplex import enumerate_basis
from khf.roots import CartanType, build_root_system
from khf.weyl import enumerate_weyl


@lru_cache(maxsize=None)
def system(name):
    return build_root_system(CartanType.parse(name))


@lru_cache(maxsize=None)
def group(name):
    return enumerate_weyl(system(name))


@lru_cache(maxsize=None)
def basis(name):
    return enumerate_basis(system(name))


@lru_cache(maxsize=None)
def operators(name):
    return build_operators(basis(name))
