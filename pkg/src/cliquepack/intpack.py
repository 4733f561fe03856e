"""Integral K_k-packings: exact branch-and-bound, greedy lower bounds, and a
simple rounding of fractional packings.

The rounding is a greedy surrogate. It keeps the heaviest support cliques
that stay edge-disjoint and carries no asymptotic guarantee on the
fractional/integral gap.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor

from .errors import BudgetExceeded, ParameterError, ParseError
from .fracpack import FractionalPacking, fractional_packing_number, kk_cliques, validate_fractional
from .graph import Clique, Graph, clique_edges


@dataclass
class IntegralPacking:
    k: int
    copies: list[Clique] = field(default_factory=list)

    def __len__(self):
        return len(self.copies)


@dataclass
class GapReport:
    nu_star: Fraction
    nu: int
    gap: Fraction
    method: str  # "exact" | "greedy-lower-bound"


def is_maximal(g: Graph, p: IntegralPacking) -> bool:
    used = {e for c in p.copies for e in clique_edges(c)}
    return not any(used.isdisjoint(clique_edges(c)) for c in kk_cliques(g, p.k))


def max_packing_exact(g: Graph, k: int, node_budget: int = 1_000_000) -> IntegralPacking:
    """Maximum set of edge-disjoint k-cliques by branch-and-bound.

    Branches on the smallest still-open edge: either one of its available
    cliques is taken, or the edge is closed. The bound at each node is the
    current count plus floor(open edges / C(k,2)); the root LP value caps
    the whole search. Raises :class:`BudgetExceeded` (carrying the best
    packing so far) instead of returning an unproven answer.
    """
    if node_budget <= 0:
        raise ParameterError("node budget must be positive")
    cliques = kk_cliques(g, k)
    if not cliques:
        return IntegralPacking(k, [])
    index = g.edge_index()
    per = comb(k, 2)
    clique_masks = []
    for c in cliques:
        mask = 0
        for e in clique_edges(c):
            mask |= 1 << index[e]
        clique_masks.append(mask)
    by_edge: list[list[int]] = [[] for _ in g.edges]
    for j, c in enumerate(cliques):
        for e in clique_edges(c):
            by_edge[index[e]].append(j)

    # edges lying in no clique never matter
    open_mask = 0
    for m in clique_masks:
        open_mask |= m
    ceiling = floor(fractional_packing_number(g, k).lp_value)

    best: list[int] = []
    chosen: list[int] = []
    nodes = 0

    def go(open_: int):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(
                f"branch-and-bound exceeded {node_budget} nodes",
                best=IntegralPacking(k, [cliques[j] for j in best]),
            )
        if len(chosen) > len(best):
            best = list(chosen)
        if len(best) >= ceiling:
            return True
        if len(chosen) + bin(open_).count("1") // per <= len(best):
            return False
        if not open_:
            return False
        low = open_ & -open_
        e = low.bit_length() - 1
        for j in by_edge[e]:
            m = clique_masks[j]
            if m & open_ == m:
                chosen.append(j)
                if go(open_ & ~m):
                    return True
                chosen.pop()
        return go(open_ ^ low)

    go(open_mask)
    return IntegralPacking(k, sorted(cliques[j] for j in best))


def greedy_packing(g: Graph, k: int, order_seed: int = 0) -> IntegralPacking:
    """Maximal packing from scanning the k-cliques in a seeded random order."""
    cliques = kk_cliques(g, k)
    random.Random(order_seed).shuffle(cliques)
    used: set = set()
    out = []
    for c in cliques:
        es = clique_edges(c)
        if used.isdisjoint(es):
            used.update(es)
            out.append(c)
    return IntegralPacking(k, sorted(out))


def round_fractional(g: Graph, p: FractionalPacking) -> IntegralPacking:
    """Heaviest-first, lexicographic on ties, keep whatever stays edge-disjoint."""
    rep = validate_fractional(g, p)
    if not rep.valid:
        raise ParameterError("invalid fractional packing: " + "; ".join(rep.violations[:3]))
    support = sorted(p.support(), key=lambda c: (-Fraction(p.weights[c]), c))
    used: set = set()
    out = []
    for c in support:
        es = clique_edges(c)
        if used.isdisjoint(es):
            used.update(es)
            out.append(c)
    return IntegralPacking(p.k, sorted(out))


def gap_report(g: Graph, k: int, exact: bool = True, node_budget: int = 1_000_000,
               order_seed: int = 0) -> GapReport:
    nu_star = Fraction(fractional_packing_number(g, k).lp_value)
    if exact:
        nu, method = len(max_packing_exact(g, k, node_budget)), "exact"
    else:
        nu, method = len(greedy_packing(g, k, order_seed)), "greedy-lower-bound"
    return GapReport(nu_star, nu, nu_star - nu, method)


def integral_to_json(p: IntegralPacking) -> dict:
    return {"k": p.k, "copies": [[v + 1 for v in c] for c in sorted(p.copies)]}


def integral_from_json(obj: dict) -> IntegralPacking:
    try:
        return IntegralPacking(int(obj["k"]), [tuple(sorted(v - 1 for v in c)) for c in obj["copies"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed integral packing: {exc}") from None


def gap_to_json(rep: GapReport) -> dict:
    return {"nu_star": str(rep.nu_star), "nu": rep.nu, "gap": str(rep.gap), "method": rep.method}
