"""Fractional K_k-packings: the packing LP over all k-cliques, the exact
packing number, and explicit fractional decompositions of K_n and K_{2k-1}^-.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import ParameterError, ParseError
from .graph import Clique, Graph, clique_edges, complete_graph, enumerate_cliques, remove_edges
from .lp import PackingLP, solve_exact, solve_float


@dataclass
class FractionalPacking:
    k: int
    weights: dict[Clique, Fraction] = field(default_factory=dict)

    @property
    def value(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def support(self) -> list[Clique]:
        return sorted(c for c, w in self.weights.items() if w != 0)

    def edge_loads(self) -> dict:
        loads: dict = {}
        for c, w in self.weights.items():
            for e in clique_edges(c):
                loads[e] = loads.get(e, 0) + w
        return loads


@dataclass
class DecompositionReport:
    k: int
    lp_value: Fraction | float
    target: Fraction
    is_fractional_decomposition: bool
    witness: FractionalPacking
    exact: bool = True


@dataclass
class ValidityReport:
    valid: bool
    violations: list[str] = field(default_factory=list)


def kk_cliques(g: Graph, k: int) -> list[Clique]:
    if k > g.n:
        return []
    return enumerate_cliques(g, k)


def packing_lp(g: Graph, k: int) -> tuple[PackingLP, list[Clique]]:
    """One variable per k-clique, one row per edge of ``g``."""
    cliques = kk_cliques(g, k)
    index = g.edge_index()
    rows: list[list[int]] = [[] for _ in g.edges]
    for j, c in enumerate(cliques):
        for e in clique_edges(c):
            rows[index[e]].append(j)
    return PackingLP(len(cliques), tuple(tuple(r) for r in rows)), cliques


def decomposition_target(g: Graph, k: int) -> Fraction:
    return Fraction(g.m, comb(k, 2))


def fractional_packing_number(g: Graph, k: int, exact: bool = True, tol: float = 1e-9) -> DecompositionReport:
    if k < 2:
        raise ParameterError("clique order must be at least 2")
    lp, cliques = packing_lp(g, k)
    target = decomposition_target(g, k)
    if exact:
        sol = solve_exact(lp)
        weights = {c: w for c, w in zip(cliques, sol.assignment) if w}
        witness = FractionalPacking(k, weights)
        return DecompositionReport(k, sol.value, target, sol.value == target, witness)
    sol = solve_float(lp, tol)
    weights = {c: w for c, w in zip(cliques, sol.assignment) if w > tol}
    return DecompositionReport(k, sol.value, target, abs(sol.value - target) <= tol,
                               FractionalPacking(k, weights), exact=False)


def uniform_complete_decomposition(n: int, k: int) -> FractionalPacking:
    """Weight 1/C(n-2, k-2) on every k-clique of K_n; each edge then carries exactly 1."""
    if k < 2 or n < k:
        raise ParameterError(f"need 2 <= k <= n, got n={n}, k={k}")
    w = Fraction(1, comb(n - 2, k - 2))
    return FractionalPacking(k, {c: w for c in enumerate_cliques(complete_graph(n), k)})


def near_complete_host(k: int) -> Graph:
    """K_{2k-1} with the edge (0, 1) removed."""
    return remove_edges(complete_graph(2 * k - 1), [(0, 1)])


def near_complete_decomposition(k: int) -> FractionalPacking:
    """Fractional K_k-decomposition of K_{2k-1}^- (host: :func:`near_complete_host`).

    The two non-adjacent vertices are 0 and 1. Every k-clique meeting them gets
    weight 1/C(2k-4, k-2), the rest 0. Edges at 0 or 1 lie on C(2k-4, k-2) such
    cliques; an edge among the other 2k-3 vertices lies on 2*C(2k-5, k-3) of
    them, and the two counts agree.
    """
    if k < 3:
        raise ParameterError("K_{2k-1}^- decomposition needs k >= 3")
    w = Fraction(1, comb(2 * k - 4, k - 2))
    host = near_complete_host(k)
    return FractionalPacking(k, {c: w for c in enumerate_cliques(host, k) if c[0] in (0, 1)})


def validate_fractional(g: Graph, p: FractionalPacking, require_decomposition: bool = False) -> ValidityReport:
    bad = []
    loads = {e: Fraction(0) for e in g.edges}
    for c, w in sorted(p.weights.items()):
        w = Fraction(w)
        if len(c) != p.k or list(c) != sorted(set(c)):
            bad.append(f"copy {list(c)} is not a sorted {p.k}-set")
            continue
        if any(not 0 <= v < g.n for v in c):
            bad.append(f"copy {list(c)} uses a vertex outside the graph")
            continue
        if not g.is_clique(c):
            missing = next(e for e in clique_edges(c) if not g.has_edge(*e))
            bad.append(f"copy {list(c)} is not a clique: missing edge {missing}")
            continue
        if not 0 <= w <= 1:
            bad.append(f"copy {list(c)} has weight {w} outside [0, 1]")
        for e in clique_edges(c):
            loads[e] += w
    for e, s in loads.items():
        if s > 1:
            bad.append(f"edge {e} has load {s} > 1")
        elif require_decomposition and s != 1:
            bad.append(f"edge {e} has load {s} != 1")
    return ValidityReport(not bad, bad)


def packing_to_json(p: FractionalPacking) -> dict:
    return {
        "k": p.k,
        "weights": [
            {"vertices": [v + 1 for v in c], "weight": str(Fraction(p.weights[c]))}
            for c in p.support()
        ],
    }


def packing_from_json(obj: dict) -> FractionalPacking:
    try:
        k = int(obj["k"])
        weights = {}
        for item in obj["weights"]:
            c = tuple(sorted(v - 1 for v in item["vertices"]))
            if c in weights:
                raise ParseError(f"copy {item['vertices']} listed twice")
            weights[c] = Fraction(item["weight"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed fractional packing: {exc}") from None
    return FractionalPacking(k, weights)


def report_to_json(g: Graph, rep: DecompositionReport) -> dict:
    value = str(rep.lp_value) if rep.exact else repr(float(rep.lp_value))
    return {
        "k": rep.k,
        "n": g.n,
        "m": g.m,
        "mode": "exact" if rep.exact else "float",
        "value": value,
        "target": str(rep.target),
        "is_fractional_decomposition": rep.is_fractional_decomposition,
        "witness": packing_to_json(rep.witness) if rep.exact else {
            "k": rep.k,
            "weights": [{"vertices": [v + 1 for v in c], "weight": repr(float(rep.witness.weights[c]))}
                        for c in rep.witness.support()],
        },
    }

