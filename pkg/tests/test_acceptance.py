"""Acceptance criteria, one PASS/FAIL line each.

Lines are printed by each test and repeated in the pytest terminal summary.
Criterion 6 contains one clause the pipeline cannot meet (see the K_22 test);
it is marked as an expected failure so the rest of the suite stays green.
"""
import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from math import comb
from pathlib import Path

import networkx as nx
import pytest

from cliquepack.bounds import edge_clique_bound, verify_edge_bound
from cliquepack.decomposer import DecomposerConfig, DecompositionFailure, decompose
from cliquepack.designs import DesignError, projective_plane_design, search_design, validate_design
from cliquepack.extremal import blow_up, scaled_report, structural_bound_report
from cliquepack.fracpack import (
    fractional_packing_number,
    near_complete_decomposition,
    near_complete_host,
    validate_fractional,
)
from cliquepack.graph import Graph, complete_graph, cycle_graph, remove_edges, write_graph
from cliquepack.intpack import gap_report, max_packing_exact
from cliquepack.verify import verify_certificate

sys.path.insert(0, str(Path(__file__).parent))
from mutations import mutate  # noqa: E402
from oracles import brute_force_nu, per_edge_clique_count  # noqa: E402

RESULTS: dict[int, str] = {}


def report(n: int, ok: bool, detail: str, elapsed: float, limit: float | None = None):
    timed = limit is None or elapsed < limit
    verdict = "PASS" if ok and timed else "FAIL"
    budget = f" (limit {limit:g}s)" if limit else ""
    line = f"[criterion {n}] {verdict}: {detail} [{elapsed:.2f}s{budget}]"
    RESULTS[n] = line
    print(line, flush=True)
    return ok and timed


def test_criterion_1_exact_lp_values():
    start = time.perf_counter()
    bad = []
    for n in range(3, 10):
        got = fractional_packing_number(complete_graph(n), 3).lp_value
        if got != Fraction(n * (n - 1), 6):
            bad.append(f"K_{n}: {got}")
    k4 = fractional_packing_number(complete_graph(4), 3).lp_value
    k5m = fractional_packing_number(remove_edges(complete_graph(5), [(0, 1)]), 3).lp_value
    if k4 != 2:
        bad.append(f"K_4: {k4}")
    if k5m != 3:
        bad.append(f"K_5^-: {k5m}")
    ok = report(1, not bad, "K_n = n(n-1)/6 for n=3..9, K_4 = 2, K_5^- = 3" + (f"; wrong {bad}" if bad else ""),
                time.perf_counter() - start, 10)
    assert ok


def test_criterion_2_near_complete_decompositions():
    start = time.perf_counter()
    notes = []
    ok = True
    for k in (3, 4, 5):
        p = near_complete_decomposition(k)
        valid = validate_fractional(near_complete_host(k), p, require_decomposition=True).valid
        want = Fraction(comb(2 * k - 1, 2) - 1, comb(k, 2))
        ok &= valid and p.value == want
        notes.append(f"k={k}: value {p.value} (want {want}), strict {'ok' if valid else 'violated'}")
    assert report(2, ok, "; ".join(notes), time.perf_counter() - start, 1)


def test_criterion_3_seven_vertex_oracle():
    start = time.perf_counter()
    graphs = [g for g in nx.graph_atlas_g() if g.number_of_nodes() == 7]
    mismatches, lp_violations = 0, 0
    for h in graphs:
        g = Graph(7, [tuple(sorted(e)) for e in h.edges()])
        nu = len(max_packing_exact(g, 3))
        if nu != brute_force_nu(g.edges, 7):
            mismatches += 1
        if nu > fractional_packing_number(g, 3).lp_value:
            lp_violations += 1
    ok = len(graphs) == 1044 and mismatches == 0 and lp_violations == 0
    assert report(3, ok, f"{len(graphs)} graphs on 7 vertices, {mismatches} nu mismatches vs brute force, "
                         f"{lp_violations} cases of nu > nu*", time.perf_counter() - start, 300)


def test_criterion_4_gap_surrogate():
    start = time.perf_counter()
    k4, k7 = gap_report(complete_graph(4), 3), gap_report(complete_graph(7), 3)
    ok = k4.gap == 1 and k7.gap == 0 and k7.nu == 7
    assert report(4, ok, f"gap(K_4) = {k4.gap}, gap(K_7) = {k7.gap} with nu = {k7.nu}",
                  time.perf_counter() - start, 10)


def test_criterion_5_designs():
    start = time.perf_counter()
    pg = projective_plane_design(4)
    fano = search_design(7, 3)
    try:
        search_design(6, 3)
        six = "found (wrong)"
    except DesignError as exc:
        six = exc.reason
    ok = (validate_design(pg).valid and (pg.n, pg.t, len(pg.blocks)) == (21, 5, 21)
          and validate_design(fano).valid and len(fano.blocks) == 7 and six == "nonexistent")
    assert report(5, ok, f"PG(2,4): {len(pg.blocks)} blocks valid; S(2,3,7): {len(fano.blocks)} blocks; "
                         f"S(2,3,6): {six}", time.perf_counter() - start, 30)


def _mutations_caught(g, cert, seed):
    rng = random.Random(seed)
    return sum(not verify_certificate(g, mutate(cert, rng, g.n)[1], 3).valid for _ in range(10))


def _criterion_6():
    pg4 = projective_plane_design(4)
    k21 = complete_graph(21)
    k21e = remove_edges(k21, [(0, 1)])
    c1 = decompose(k21, DecomposerConfig(), pg4)
    c2 = decompose(k21e, DecomposerConfig(), pg4)
    edges2 = sum(len(p.edges) for p in c2.parts)
    caught = _mutations_caught(k21, c1, 0) + _mutations_caught(k21e, c2, 1)
    parts = {
        "K_21 -> 21 Kt": c1.counts() == {"Kk": 0, "Kt": 21, "KtMinus": 0} and verify_certificate(k21, c1, 3).valid,
        "K_21-e -> 9/18/2, 209 edges": c2.counts() == {"Kk": 9, "Kt": 2, "KtMinus": 18} and edges2 == 209
        and verify_certificate(k21e, c2, 3).valid,
        "20/20 mutations caught": caught == 20,
    }
    k22 = complete_graph(22)
    try:
        c3 = decompose(k22, DecomposerConfig(), pg4)
        pre = [p for p in c3.parts if p.source and p.source[0] == "preprocess"]
        pre_counts = (sum(p.tag == "Kk" for p in pre), sum(p.tag == "KtMinus" for p in pre))
        parts["K_22 -> 9 Kk + 1 KtMinus absorbed, then 21 Kt"] = (
            pre_counts == (9, 1) and c3.counts()["Kt"] == 21 and verify_certificate(k22, c3, 3).valid)
        k22_note = f"K_22 counts {c3.counts()}"
    except DecompositionFailure as exc:
        parts["K_22 -> 9 Kk + 1 KtMinus absorbed, then 21 Kt"] = False
        k22_note = (f"K_22 failed at stage '{exc.stage}': absorbing the K_5 tile leaves a reduced graph with "
                    f"195 edges, not K_21, so 21 Kt parts are impossible (27 + 9 + 210 != 231)")
    return parts, k22_note


@pytest.mark.xfail(strict=True, reason="K_22 clause is arithmetically unattainable; see decisions ledger")
def test_criterion_6_decomposer_end_to_end():
    start = time.perf_counter()
    parts, k22_note = _criterion_6()
    failed = [name for name, ok in parts.items() if not ok]
    detail = "; ".join(f"{name}: {'ok' if ok else 'NO'}" for name, ok in parts.items()) + f". {k22_note}"
    assert report(6, not failed, detail, time.perf_counter() - start, 60)


def test_criterion_6_attainable_clauses():
    parts, _ = _criterion_6()
    assert all(ok for name, ok in parts.items() if not name.startswith("K_22"))


def test_criterion_7_extremal_bound():
    start = time.perf_counter()
    g, spec = blow_up(3, cycle_graph(6))
    exact = structural_bound_report(g, spec, lp="exact")
    t0 = time.perf_counter()
    flt = structural_bound_report(g, spec, lp="float")
    float_time = time.perf_counter() - t0
    scl = scaled_report(3, 1, Fraction(1, 20))
    ok = (exact.lp_value <= 12 < 16 == exact.target and exact.deficiency == Fraction(1, 4)
          and flt.lp_value <= 12 + 1e-6 and float_time < 10
          and (scl.n, scl.min_degree, scl.structural_bound, scl.target) == (96, 68, 960, 1088))
    assert report(7, ok, f"mini: LP {exact.lp_value} <= 12 < {exact.target}, deficiency {exact.deficiency}, "
                         f"float LP {flt.lp_value:.6f} in {float_time:.2f}s; scaled instance: n={scl.n}, "
                         f"delta={scl.min_degree}, bound {scl.structural_bound}, target {scl.target}",
                  time.perf_counter() - start, 120)


def test_criterion_8_bounds():
    start = time.perf_counter()
    k21 = complete_graph(21)
    bound = edge_clique_bound(21, 1, 5).value
    counts = set(per_edge_clique_count(k21.edges, 21, 5).values())
    g = remove_edges(complete_graph(12), [(2 * i, 2 * i + 1) for i in range(6)])
    rep = verify_edge_bound(g, 4)
    ok = bound == 969 and counts == {969} and rep.holds and rep.bound.value == 24
    assert report(8, ok, f"bound(21,1,5) = {bound}, per-edge K_5 counts in K_21 = {sorted(counts)}; "
                         f"K_12 minus matching: bound {rep.bound.value}, min count {rep.min_count}",
                  time.perf_counter() - start, 120)


def test_criterion_9_cli_determinism(tmp_path):
    start = time.perf_counter()
    graphs = {"k4": complete_graph(4), "k7": complete_graph(7), "k21e": remove_edges(complete_graph(21), [(0, 1)]),
              "k12pm": remove_edges(complete_graph(12), [(2 * i, 2 * i + 1) for i in range(6)])}
    for name, g in graphs.items():
        write_graph(g, tmp_path / f"{name}.graph")
    cert = tmp_path / "cert.json"
    commands = {
        "fracpack": ["fracpack", "-k", "3", "k7.graph"],
        "intpack": ["intpack", "-k", "3", "--method", "greedy", "k7.graph"],
        "gap": ["gap", "-k", "3", "--exact", "k7.graph"],
        "decompose": ["decompose", "-k", "3", "--pg", "4", "k21e.graph"],
        "design": ["design", "--search", "13", "4"],
        "extremal": ["extremal", "-k", "3", "--mini", "--part-regular", "8", "3", "--lp", "exact"],
        "bounds": ["bounds", "--verify", "k12pm.graph", "-t", "4"],
        "verify": ["verify", "cert.json", "k21e.graph"],
    }
    differing = []
    for name, argv in commands.items():
        outs, manifests = [], []
        for run in range(2):
            man = tmp_path / f"{name}.manifest"
            res = subprocess.run([sys.executable, "-m", "cliquepack", "--seed", "7", *argv, "--manifest", str(man)],
                                 cwd=tmp_path, capture_output=True)
            outs.append(res.stdout)
            m = json.loads(man.read_text())
            m.pop("timings")
            manifests.append(m)
        if name == "decompose":
            cert.write_bytes(outs[0])
        if outs[0] != outs[1] or manifests[0] != manifests[1] or not outs[0]:
            differing.append(name)
    ok = not differing
    assert report(9, ok, f"{len(commands) - len(differing)}/{len(commands)} subcommands byte-identical across "
                         f"two runs" + (f"; differing: {differing}" if differing else ""),
                  time.perf_counter() - start)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
