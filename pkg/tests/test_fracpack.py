import json
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings

from cliquepack.errors import ParameterError, ParseError
from cliquepack.fracpack import (
    FractionalPacking,
    fractional_packing_number,
    kk_cliques,
    near_complete_decomposition,
    near_complete_host,
    packing_from_json,
    packing_to_json,
    report_to_json,
    uniform_complete_decomposition,
    validate_fractional,
)
from cliquepack.graph import complete_graph, cycle_graph, remove_edges

from conftest import graphs
from oracles import brute_force_nu

K5_MINUS = remove_edges(complete_graph(5), [(0, 1)])


@pytest.mark.parametrize("g, value, target, ok", [
    (complete_graph(4), 2, 2, True),
    (K5_MINUS, 3, 3, True),
    (cycle_graph(6), 0, 2, False),
])
def test_packing_number_examples(g, value, target, ok):
    rep = fractional_packing_number(g, 3)
    assert (rep.lp_value, rep.target, rep.is_fractional_decomposition) == (value, target, ok)
    assert validate_fractional(g, rep.witness, require_decomposition=ok).valid


@pytest.mark.parametrize("n", range(3, 9))
def test_complete_graph_values(n):
    assert fractional_packing_number(complete_graph(n), 3).lp_value == Fraction(n * (n - 1), 6)


def test_float_mode():
    rep = fractional_packing_number(complete_graph(5), 3, exact=False)
    assert not rep.exact and abs(rep.lp_value - 10 / 3) < 1e-9 and rep.is_fractional_decomposition


def test_uniform_complete_decomposition():
    p = uniform_complete_decomposition(5, 3)
    assert len(p.weights) == 10 and set(p.weights.values()) == {Fraction(1, 3)}
    assert p.value == Fraction(10, 3)
    p = uniform_complete_decomposition(7, 4)
    assert len(p.weights) == 35 and set(p.weights.values()) == {Fraction(1, 10)}
    assert p.value == Fraction(7, 2)
    assert validate_fractional(complete_graph(7), p, require_decomposition=True).valid
    with pytest.raises(ParameterError):
        uniform_complete_decomposition(2, 3)


@pytest.mark.parametrize("k, copies, weight", [(3, 6, Fraction(1, 2)), (4, 20, Fraction(1, 6)),
                                               (5, 70, Fraction(1, 20))])
def test_near_complete_decomposition(k, copies, weight):
    p = near_complete_decomposition(k)
    host = near_complete_host(k)
    assert host.m == comb(2 * k - 1, 2) - 1
    assert len(p.support()) == copies
    assert set(p.weights.values()) == {weight}
    assert p.value == Fraction(comb(2 * k - 1, 2) - 1, comb(k, 2))
    assert validate_fractional(host, p, require_decomposition=True).valid


def test_near_complete_rejects_small_k():
    with pytest.raises(ParameterError):
        near_complete_decomposition(2)


@pytest.mark.parametrize("k", range(3, 9))
def test_edge_count_identity(k):
    # an edge at a non-adjacent vertex and an edge among the rest see the same number of copies
    assert comb(2 * k - 4, k - 2) == 2 * comb(2 * k - 5, k - 3)


def test_validator_examples():
    k4 = complete_graph(4)
    half = FractionalPacking(3, {c: Fraction(1, 2) for c in kk_cliques(k4, 3)})
    assert validate_fractional(k4, half, require_decomposition=True).valid
    ones = FractionalPacking(3, {c: Fraction(1) for c in kk_cliques(k4, 3)})
    rep = validate_fractional(k4, ones)
    assert not rep.valid and len(rep.violations) == 6
    assert all("load 2" in v for v in rep.violations)


def test_validator_rejects_non_clique_and_bad_weight():
    g = cycle_graph(4)
    rep = validate_fractional(g, FractionalPacking(3, {(0, 1, 2): Fraction(1, 2)}))
    assert not rep.valid and "not a clique" in rep.violations[0]
    k4 = complete_graph(4)
    rep = validate_fractional(k4, FractionalPacking(3, {(0, 1, 2): Fraction(-1, 2)}))
    assert not rep.valid


def test_strict_mode_is_exact():
    k4 = complete_graph(4)
    w = Fraction(1, 2) - Fraction(1, 10 ** 30)
    p = FractionalPacking(3, {c: w for c in kk_cliques(k4, 3)})
    assert validate_fractional(k4, p).valid
    assert not validate_fractional(k4, p, require_decomposition=True).valid


def test_json_round_trip():
    p = near_complete_decomposition(4)
    obj = json.loads(json.dumps(packing_to_json(p)))
    assert obj["weights"][0]["weight"] == "1/6"
    back = packing_from_json(obj)
    assert back.weights == p.weights and back.k == 4
    with pytest.raises(ParseError):
        packing_from_json({"k": 3, "weights": [{"vertices": [1, 2, 3], "weight": "x"}]})


def test_report_json():
    obj = report_to_json(K5_MINUS, fractional_packing_number(K5_MINUS, 3))
    assert obj["value"] == "3" and obj["target"] == "3" and obj["m"] == 9
    assert obj["is_fractional_decomposition"] is True


@pytest.mark.parametrize("n", [5, 7, 9])
def test_deleting_an_edge(n):
    full = fractional_packing_number(complete_graph(n), 3)
    g = remove_edges(complete_graph(n), [(0, 1)])
    rep = fractional_packing_number(g, 3)
    assert full.lp_value - 1 <= rep.lp_value <= full.lp_value
    assert rep.is_fractional_decomposition == (rep.lp_value == rep.target)


@settings(max_examples=30)
@given(graphs(max_n=8))
def test_fractional_at_least_integral(g):
    rep = fractional_packing_number(g, 3)
    assert rep.lp_value >= brute_force_nu(g.edges, g.n)
    assert rep.lp_value <= rep.target
    assert validate_fractional(g, rep.witness).valid
