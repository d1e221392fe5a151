"""HTTP front end: a thin FastAPI layer over the handler functions.

Every endpoint returns the same JSON document the CLI emits; numbers
are exact strings throughout, never floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from .. import api
from ..hodgefamily import NotInRegime, SingularParameter
from ..invcomplex import BasisTooLarge
from ..roots import UnsupportedType
from ..weyl import GroupTooLarge

app = FastAPI(
    title="khf",
    description="Exact harmonic-form and Schubert-calculus computations "
    "for small-rank simple types.",
)


class RootsResponse(BaseModel):
    schema_: str = Field(alias="schema")
    type: str
    positive_roots: list
    rho_pairings: list
    g_weights: list

    model_config = {"populate_by_name": True}


class WeylResponse(BaseModel):
    schema_: str = Field(alias="schema")
    type: str
    order: int
    elements: list
    bruhat_covers: list

    model_config = {"populate_by_name": True}


class ComplexResponse(BaseModel):
    schema_: str = Field(alias="schema")
    type: str
    dimension: int
    bigraded_dimensions: list
    betti: Optional[list] = None

    model_config = {"populate_by_name": True}


class HarmonicRequest(BaseModel):
    words: Optional[list[list[int]]] = None


class DocumentResponse(BaseModel):
    """Generic passthrough for the larger documents."""

    schema_: str = Field(alias="schema")
    type: str

    model_config = {"populate_by_name": True, "extra": "allow"}


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except UnsupportedType as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except (BasisTooLarge, GroupTooLarge) as exc:
        raise HTTPException(status_code=413, detail=str(exc))
    except (SingularParameter, NotInRegime) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.get("/v1/roots/{type_name}", response_model=RootsResponse)
def get_roots(type_name: str):
    return _guard(api.roots, type_name)


@app.get("/v1/weyl/{type_name}", response_model=WeylResponse)
def get_weyl(type_name: str):
    return _guard(api.weyl, type_name)


@app.get("/v1/complex/{type_name}", response_model=ComplexResponse)
def get_complex(type_name: str):
    return _guard(api.complex_summary, type_name)


@app.post("/v1/harmonic/{type_name}", response_model=DocumentResponse)
def post_harmonic(type_name: str, req: HarmonicRequest):
    return _guard(api.harmonic, type_name, req.words)


@app.get("/v1/harmonic/{type_name}", response_model=DocumentResponse)
def get_harmonic(type_name: str):
    return _guard(api.harmonic, type_name)


@app.get("/v1/dmatrix/{type_name}", response_model=DocumentResponse)
def get_dmatrix(type_name: str):
    return _guard(api.dmatrix, type_name)


@app.get("/v1/schubert/{type_name}", response_model=DocumentResponse)
def get_schubert(type_name: str, at_zero: bool = Query(default=False)):
    return _guard(api.schubert, type_name, at_zero=at_zero)


@app.get("/v1/hodge-limit/{type_name}", response_model=DocumentResponse)
def get_hodge_limit(
    type_name: str,
    steps: int = Query(default=8, ge=2),
    base: str = Query(default="2"),
):
    return _guard(
        api.hodge_limit, type_name, steps=steps, base_ratio=Fraction(base)
    )


@app.get("/v1/verify/{type_name}", response_model=DocumentResponse)
def get_verify(type_name: str, suite: str = Query(default="all")):
    try:
        return _guard(api.verify, type_name, suite)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
