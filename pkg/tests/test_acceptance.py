"""Acceptance gate: one test and one printed pass/fail line per
criterion.  Every comparison is exact; nothing is rounded or tolerated.

Criterion 9's final-distance threshold is expected to fail at the
pinned parameters: the doubling sequence needs nine steps, not eight,
to push the operator distances below 10^-6.  The test reports the
exact measured values and fails honestly rather than loosening the
comparison.
"""

import json
import os
import subprocess
import sys
from collections import Counter
from fractions import Fraction

from khf.equivariant import (
    billey_d,
    build_dmatrix,
    chevalley_monk_oracle,
    structure_constants,
)
from khf.harmonic import (
    check_disjointness,
    check_sl4_nonsemisimple,
    h_element,
    kostant_form,
)
from khf.hodgefamily import DeformParams, HodgeSolver, certify_limits
from khf.invcomplex import (
    BasisTooLarge,
    betti_numbers,
    coboundary_d,
    enumerate_basis,
    kostant_partial,
    operator_J,
    pairing,
    partial_infty,
    pi_power_at,
)
from khf.linalg import mat_kernel, mat_rank
from conftest import basis, group, operators, system

RANK2 = ["A1", "A2", "B2", "G2"]


def _report(number, label, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    line = f"[{status}] criterion {number}: {label}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def _is_zero(m):
    return all(not x for row in m.entries for x in row)


def _is_zero_c(m):
    return all(x.is_zero() for row in m.entries for x in row)


def test_criterion_01_complex_identities():
    ok = True
    for name in RANK2 + ["A3"]:
        b = basis(name)
        d = b.matrix_d()
        p = b.matrix_partial()
        pinf = b.matrix_partial_infty()
        dc = b.complexify(d)
        d1, d2 = b.matrix_d1(), b.matrix_d2()
        p1, p2 = b.matrix_partial1(), b.matrix_partial2()
        ok = ok and _is_zero(d @ d) and _is_zero(p @ p)
        ok = ok and _is_zero_c(pinf @ pinf)
        ok = ok and _is_zero_c(dc @ pinf + pinf @ dc)
        ok = ok and _is_zero(d1 @ p2 + p2 @ d1)
        ok = ok and _is_zero(d2 @ p1 + p1 @ d2)
        ok = ok and (d1 @ p1 + p1 @ d1 == d2 @ p2 + p2 @ d2)
    _report(1, "complex identities (squares and anticommutators)", ok)


def test_criterion_02_betti_numbers():
    checked = []
    ok = True
    for name in ["A1", "A2", "A3", "A4", "B2", "C2", "B3", "C3", "G2"]:
        counts = Counter(w.length for w in group(name).elements)
        betti = betti_numbers(basis(name))
        for deg, b_deg in enumerate(betti):
            expected = 0 if deg % 2 else counts.get(deg // 2, 0)
            ok = ok and b_deg == expected
        checked.append(name)
    # D4's complex has 79552 monomials, past the exact-rank resource
    # cap; the guard must refuse it rather than approximate
    try:
        enumerate_basis(system("D4"))
        guarded = False
    except BasisTooLarge:
        guarded = True
    ok = ok and guarded
    _report(
        2,
        "Betti numbers count Weyl lengths, odd cohomology vanishes",
        ok,
        f"exact on {'/'.join(checked)}; D4 stopped by the size guard",
    )


def test_criterion_03_delta_pairing():
    ok = True
    for name in RANK2:
        b, g = basis(name), group(name)
        for w1 in g.elements:
            form = operator_J(h_element(b, g, w1))
            for w in g.elements:
                if w.length != w1.length:
                    continue
                val = pairing(form, pi_power_at(b.rs, g, w, w.length))
                expected = 1 if w is w1 else 0
                ok = ok and val.re == expected and val.im == 0
    _report(3, "delta pairing of h-monomials against pi-powers", ok)


def test_criterion_04_laplacian_structure():
    ok = True
    for name in RANK2:
        ops = operators(name)
        g = group(name)
        n = ops.basis.dim
        # L diagonal with the norm-difference eigenvalue is asserted
        # at construction; here the decomposition and the kernel
        ok = ok and ops.S == ops.L + ops.EI
        k = len(mat_kernel(ops.S))
        ok = ok and k == len(g)
        ok = ok and k + mat_rank(ops.S) == n
        rep = check_disjointness(ops.basis)
        ok = ok and rep["disjoint"] and rep["im_S_is_im_d_plus_im_partial"]
    _report(4, "Laplacian structure (S = L + E, kernel, disjointness)", ok)


def test_criterion_05_harmonicity():
    ok = True
    for name in RANK2:
        ops = operators(name)
        b, g = ops.basis, group(name)
        for w in g.elements:
            s = kostant_form(ops, g, w).element
            ok = ok and coboundary_d(b, s).is_zero()
            ok = ok and kostant_partial(b, s).is_zero()
            ok = ok and partial_infty(b, s).is_zero()
            ((mono, coeff),) = h_element(b, g, w).terms.items()
            ok = ok and s.terms.get(mono) == coeff
            ok = ok and all(
                m.bidegree == (w.length, w.length) for m in s.terms
            )
    _report(5, "harmonic forms closed, pure bidegree, leading term", ok)


def test_criterion_06_sl4_nonsemisimplicity():
    rep = check_sl4_nonsemisimple(basis("A3"), operators("A3"))
    ok = (
        rep["not_semisimple"]
        and rep["L_scalar"] == Fraction(1, 2)
    )
    _report(6, "nilpotent part of S on the sl(4) triple", ok)


def test_criterion_07_dmatrix():
    ok = True
    for name in RANK2 + ["A3"]:
        g = group(name)
        rs = system(name)
        dm = build_dmatrix(operators(name), g)
        for w1 in g.elements:
            for w in g.elements:
                ok = ok and dm.entry(w1, w) == billey_d(g, w1, w)
                if not g.bruhat_leq(w1, w):
                    ok = ok and dm.entry(w1, w).is_zero()
        for w in g.elements:
            e = dm.entry(g.identity, w)
            ok = ok and e.coeff == 1 and e.degree == 0
        for i in range(rs.rank):
            r = g.simple_reflection(i)
            simple = tuple(1 if j == i else 0 for j in range(rs.rank))
            entry = dm.entry(r, r)
            ok = ok and entry.degree == 1
            ok = ok and entry.coeff == rs.killing_pair(simple, rs.rho)
    _report(7, "D-matrix equals the Billey oracle with its symmetries", ok)


def test_criterion_08_structure_constants():
    ok = True
    for name in RANK2 + ["A3"]:
        g = group(name)
        rs = system(name)
        dm = build_dmatrix(operators(name), g)
        sc = structure_constants(dm)  # validates degrees and support
        M = dm.scalar
        n = len(g)
        for w1 in g.elements:
            C = sc.scalar[w1.index]
            lhs = C @ M
            for i in range(n):
                for j in range(n):
                    ok = ok and lhs[i, j] == M[w1.index, j] * M[i, j]
        for w1 in g.elements:
            for w2 in g.elements:
                for w in g.elements:
                    v = sc.at_zero(w1, w2, w)
                    ok = ok and v.denominator == 1 and v >= 0
                    ok = ok and v == sc.at_zero(w2, w1, w)
        for i in range(rs.rank):
            r = g.simple_reflection(i)
            for v in g.elements:
                oracle = chevalley_monk_oracle(g, i, v)
                for w in g.elements:
                    if w.length == v.length + 1:
                        ok = ok and sc.at_zero(r, v, w) == oracle.get(
                            w.index, Fraction(0)
                        )
    _report(
        8,
        "structure constants: multiplicativity, grading, Monk rule",
        ok,
    )


def test_criterion_09_hodge_family():
    details = []
    ok = True
    threshold = Fraction(1, 10**6)
    for name in ["A1", "A2", "B2"]:
        solver = HodgeSolver(operators(name))
        base = DeformParams.of([Fraction(4)] * system(name).rank)
        rep = certify_limits(solver, group(name), base, steps=8)
        ok = ok and rep.monotone and not rep.skipped_steps
        finals = [
            rep.d_star_distances[-1],
            rep.S_distances[-1],
            rep.form_distances[-1],
        ]
        details.append(
            f"{name} finals d*={finals[0]}, S={finals[1]}, "
            f"forms={finals[2]}"
        )
        ok = ok and all(v < threshold for v in finals)
    _report(
        9,
        "deformation distances strictly decreasing and below 10^-6 "
        "after eight doubling steps",
        ok,
        "; ".join(details),
    )


def test_criterion_10_determinism():
    def run(threads):
        env = dict(os.environ, KHF_THREADS=str(threads))
        return subprocess.run(
            [sys.executable, "-m", "khf.cli", "verify", "A2",
             "--suite", "all"],
            capture_output=True,
            env=env,
        ).stdout

    first = run(1)
    ok = bool(first) and first == run(4) and first == run(1)
    doc = json.loads(first)
    ok = ok and doc["schema"] == "khf/1"
    _report(10, "verify output byte-identical across runs and thread "
               "counts", ok)
