"""Acceptance criteria, one test per criterion, each recording a PASS/FAIL line."""

import json
import random
import time

import numpy as np

from conftest import CRITERIA_LINES
from sktnil import catalog
from sktnil.bismut import ce_differential, dc_direct, is_skt, torsion_three_form
from sktnil.cli import main
from sktnil.compose import CompositionSpec, certify_irreducible, compose, iterate_compose
from sktnil.decomp import coordinate_codim2_ideals, proof_invariants, split_codim2
from sktnil.errors import FALSIFICATION_EVENTS, PreconditionError
from sktnil.fileio import parse_algebra, serialize_algebra, write_algebra
from sktnil.forms import parse_form
from sktnil.hermitian import center_bracket_equivalence, center_is_J_invariant
from sktnil.liealg import LieAlgebra, direct_sum
from sktnil.search import MetricProblem, SearchConfig, _initial_params, residual_gradient, search_metric, skt_residual
from helpers import random_triples, three_step_control

GRID = ["1", "-1", "2", "-2", "1/2", "5/2"]


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    CRITERIA_LINES.append(line)
    print(line)
    assert ok, line


def seeds():
    return [catalog.get(n).triple for n in ("n4_abelian", "n6_abelian", "n8_nonabelian")]


def test_criterion_1_catalog_exactness():
    t0 = time.perf_counter()
    problems = []
    for name in catalog.NAMES:
        e = catalog.get(name)
        c = torsion_three_form(e.triple)
        if c != e.printed_c:
            diff = c - e.printed_c
            problems.append(f"{name}: c differs from printed c on {sorted(diff.coeffs)}")
        if not dc_direct(e.triple).is_zero() or not ce_differential(e.triple.L, c).is_zero():
            problems.append(f"{name}: dc != 0")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 1.0
    record(1, ok, f"{elapsed:.2f}s; " + ("; ".join(problems) if problems else "6/6 entries exact"))


def test_criterion_2_two_route_identity():
    t0 = time.perf_counter()
    n4, n6, n8 = seeds()
    triples = [catalog.get(n).triple for n in catalog.NAMES]
    triples += [compose(CompositionSpec(n4, n6)), compose(CompositionSpec(n4, n8))]
    triples += random_triples(200, seed=2024)
    bad = [T.name for T in triples if dc_direct(T) != ce_differential(T.L, torsion_three_form(T))]
    n_skt = sum(is_skt(T).is_skt for T in triples[8:])
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30.0 and len(triples) == 208
    record(2, ok, f"{len(triples)} triples ({n_skt} of 200 random are SKT), {len(bad)} disagreements, {elapsed:.1f}s")


def test_criterion_3_composition_reproduction():
    t0 = time.perf_counter()
    n4, n6, n8 = seeds()
    problems = []
    s12 = CompositionSpec(n4, n6)
    T12 = compose(s12)
    expected = dict(direct_sum(n4.L, n6.L).brackets)
    expected[(11, 12)] = {4: 1, 10: 1}  # de^4 = -w^{12}, df^6 = -w^{12}
    if T12.L != LieAlgebra(12, expected):
        problems.append("12-dim brackets")
    s14 = CompositionSpec(n4, n8)
    T14 = compose(s14)
    printed = parse_form(14, 3, {
        "1,2,3": "-1", "5,6,9": "-2", "5,6,11": "-1", "6,7,9": "-1", "6,8,10": "-1",
        "7,8,9": "-1", "7,8,11": "1", "4,13,14": "-1", "12,13,14": "-1",
    })
    if torsion_three_form(T14) != printed:
        problems.append("14-dim printed c")
    for T, spec in ((T12, s12), (T14, s14)):
        if not is_skt(T).is_skt or T.L.nilpotency_step() != 2:
            problems.append(f"{T.dim}-dim not SKT/2-step")
        if certify_irreducible(T, spec, (True, True)).status != "certified":
            problems.append(f"{T.dim}-dim not certified")
    elapsed = time.perf_counter() - t0
    record(3, not problems and elapsed < 1.0, f"{elapsed:.2f}s; " + ("; ".join(problems) or "both applications exact"))


def test_criterion_4_family_and_iteration():
    t0 = time.perf_counter()
    n4, n6, n8 = seeds()
    bad = []
    for r in GRID:
        for s in GRID:
            T = compose(CompositionSpec(n4, n6, r=r, s=s))
            if not is_skt(T).is_skt:
                bad.append((r, s))
    dims = []
    for seed_list, target in (([n4], 10), ([n4], 16), ([n4], 22), ([n4, n8], 14)):
        T = iterate_compose(seed_list, target)
        dims.append(T.dim)
        if T.dim != target or not is_skt(T).is_skt or T.L.nilpotency_step() != 2:
            bad.append(("iterate", target))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5.0
    record(4, ok, f"36 family members + dims {dims}, {len(bad)} failures, {elapsed:.2f}s")


def _skt_corpus():
    n4, n6, n8 = seeds()
    out = [catalog.get(n).triple for n in catalog.NAMES]
    out += [compose(CompositionSpec(n4, n6)), compose(CompositionSpec(n4, n8)), compose(CompositionSpec(n4, n4))]
    out += [compose(CompositionSpec(n4, n6, r=r, s=s)) for r, s in (("2", "3"), ("-1", "1/2"))]
    out += [iterate_compose([n4], 16), iterate_compose([n4, n8], 14)]
    out += [T for T in random_triples(200, seed=2024) if is_skt(T).is_skt]
    return out


def test_criterion_5_theorem_invariants():
    t0 = time.perf_counter()
    before = len(FALSIFICATION_EVENTS)
    corpus = _skt_corpus()
    failures = []
    n_splits = 0
    for T in corpus:
        if not is_skt(T).is_skt:
            failures.append((T.name, "not SKT"))
            continue
        if not center_is_J_invariant(T):
            failures.append((T.name, "center not J-invariant"))
        if center_bracket_equivalence(T):
            failures.append((T.name, "center/bracket equivalence"))
        step = T.L.nilpotency_step()
        if step is not None and step > 2:
            failures.append((T.name, f"step {step}"))
        for pair in coordinate_codim2_ideals(T):
            D = split_codim2(T, pair)
            n_splits += 1
            if not is_skt(D.triple_n).is_skt:
                failures.append((T.name, pair, "restriction not SKT"))
            if (D.n.nilpotency_step() or 0) <= 2 and not proof_invariants(D, T)["ok"]:
                failures.append((T.name, pair, "A/B/X invariants"))
    events = len(FALSIFICATION_EVENTS) - before
    elapsed = time.perf_counter() - t0
    ok = not failures and events == 0 and elapsed < 10.0
    record(5, ok, f"{len(corpus)} SKT triples, {n_splits} codim-2 splits, {len(failures)} failures, "
                  f"{events} falsification events, {elapsed:.1f}s")


def test_criterion_6_precondition_gate():
    t0 = time.perf_counter()
    condition = None
    try:
        compose(CompositionSpec(catalog.get("n4_abelian").triple, catalog.get("n6_nonabelian").triple))
    except PreconditionError as exc:
        condition = exc.condition
    elapsed = time.perf_counter() - t0
    record(6, condition == "center_vs_derived" and elapsed < 1.0, f"rejected with {condition!r}, {elapsed:.2f}s")


def _gradient_errors(T, points=100, h=1e-6):
    prob = MetricProblem(T.L, T.J)
    worst = 0.0
    for k in range(points):
        p = _initial_params(prob, 10_000 + k, 0.3)
        grad = residual_gradient(T.L, T.J, p)
        fd = np.zeros_like(p)
        for i in range(len(p)):
            e = np.zeros_like(p)
            e[i] = h
            fd[i] = (skt_residual(T.L, T.J, prob.metric(p + e)) - skt_residual(T.L, T.J, prob.metric(p - e))) / (2 * h)
        scale = max(np.linalg.norm(grad), np.linalg.norm(fd))
        worst = max(worst, 0.0 if scale == 0 else float(np.linalg.norm(grad - fd) / scale))
    return worst


def test_criterion_7_search_positive_control():
    n4, n6, _ = seeds()
    T12 = compose(CompositionSpec(n4, n6))
    cfg = SearchConfig(starts=20)
    t0 = time.perf_counter()
    counts = []
    for T in (n4, T12):
        res = search_metric(T.L, T.J, cfg)
        counts.append(sum(s.residual < 1e-10 for s in res.per_start))
    elapsed = time.perf_counter() - t0
    errs = [_gradient_errors(T) for T in (n4, T12)]
    ok = all(c >= 18 for c in counts) and elapsed < 60.0 and all(e < 1e-4 for e in errs)
    record(7, ok, f"converged starts n4 {counts[0]}/20, c12 {counts[1]}/20 in {elapsed:.1f}s; "
                  f"worst gradient rel. error {max(errs):.1e} over 2x100 points")


def test_criterion_8_search_negative_evidence():
    T = three_step_control()
    assert T.L.nilpotency_step() == 3 and T.validated["integrable"]
    t0 = time.perf_counter()
    res = search_metric(T.L, T.J, SearchConfig(starts=20))
    elapsed = time.perf_counter() - t0
    lo = min(s.residual for s in res.per_start)
    ok = len(res.per_start) == 20 and lo > 1e-4 and elapsed < 120.0
    record(8, ok, f"smallest final residual {lo:.2e} over 20 starts, band {res.config.eigenvalue_band:g}, "
                  f"{elapsed:.1f}s (evidence, not proof)")


def test_criterion_9_round_trip_and_determinism(tmp_path, capsys):
    n4, n6, n8 = seeds()
    triples = [catalog.get(n).triple for n in catalog.NAMES]
    triples += [compose(CompositionSpec(n4, n6)), compose(CompositionSpec(n4, n8)), iterate_compose([n4], 16)]
    triples += random_triples(50, seed=99)
    bad = 0
    for T in triples:
        text = serialize_algebra(T)
        T2 = parse_algebra(text)
        if (T2.L, T2.J, T2.g) != (T.L, T.J, T.g) or serialize_algebra(T2) != text:
            bad += 1
    write_algebra(triples[6], tmp_path / "c12.json")
    invocations = [
        ["search", "n4_abelian", "--starts", "4", "--seed", "3"],
        ["search", str(tmp_path / "c12.json"), "--starts", "2", "--seed", "5"],
        ["verify", str(tmp_path / "c12.json")],
        ["split", str(tmp_path / "c12.json"), "--complement", "11,12"],
    ]
    mismatched = 0
    for argv in invocations:
        outs = []
        for k in range(2):
            path = tmp_path / f"r{k}.txt"
            main(["--format", "structured", *argv, "--report", str(path)])
            outs.append(path.read_bytes())
        capsys.readouterr()
        json.loads(outs[0])
        mismatched += outs[0] != outs[1]
    ok = bad == 0 and mismatched == 0
    record(9, ok, f"{len(triples)} files round-trip ({bad} failures); {len(invocations)} CLI invocations, "
                  f"{mismatched} non-identical reports")
