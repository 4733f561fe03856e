"""Counting bounds for K_t copies through an edge of a dense graph."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import ParameterError
from .graph import Edge, Graph, cliques_containing_edge, min_degree


@dataclass
class BoundValue:
    value: Fraction
    flagged: bool  # vacuous (edge bound) or clamped (fraction bound)


@dataclass
class EdgeBoundReport:
    t: int
    n: int
    deficit: int
    bound: BoundValue
    min_count: int | None
    argmin: Edge | None
    holds: bool


def edge_clique_bound(n_star: int, degree_deficit: int, t: int) -> BoundValue:
    """Lower bound prod_{i=2}^{t-1} (n* - i*deficit) / (t-2)! on K_t's through any edge.

    Requires min degree >= n* - deficit. Flagged vacuous when some factor is
    negative; the product itself is returned unchanged.
    """
    if t < 2:
        raise ParameterError("t must be at least 2")
    if not 0 <= degree_deficit <= n_star:
        raise ParameterError("need 0 <= degree_deficit <= n_star")
    factors = [n_star - i * degree_deficit for i in range(2, t)]
    prod = 1
    for f in factors:
        prod *= f
    return BoundValue(Fraction(prod, factorial(t - 2)), any(f < 0 for f in factors))


def clique_fraction_bound(gamma, t: int) -> BoundValue:
    """1 - (1 - t*gamma)^(t-2), clamped to [0, 1]; flagged when 1 - t*gamma <= 0."""
    gamma = Fraction(gamma)
    if gamma < 0:
        raise ParameterError("gamma must be nonnegative")
    if t < 2:
        raise ParameterError("t must be at least 2")
    base = 1 - t * gamma
    if base <= 0:
        return BoundValue(Fraction(1), True)
    return BoundValue(1 - base ** (t - 2), False)


def verify_edge_bound(g: Graph, t: int) -> EdgeBoundReport:
    """Count K_t's on every edge and compare the minimum with the bound.

    The deficit is n - min_degree(g), so the bound's hypothesis holds with
    equality.
    """
    if not 2 <= t <= g.n:
        raise ParameterError(f"need 2 <= t <= n, got t={t}, n={g.n}")
    deficit = g.n - min_degree(g)
    bound = edge_clique_bound(g.n, deficit, t)
    counts = [(len(cliques_containing_edge(g, e, t)), e) for e in g.edges]
    if counts:
        low, arg = min(counts)
    else:
        low, arg = None, None
    holds = low is None or low >= bound.value
    return EdgeBoundReport(t, g.n, deficit, bound, low, arg, holds)


def edge_bound_to_json(rep: EdgeBoundReport) -> dict:
    return {
        "t": rep.t,
        "n": rep.n,
        "degree_deficit": rep.deficit,
        "bound": str(rep.bound.value),
        "vacuous": rep.bound.flagged,
        "per_edge_minimum": rep.min_count,
        "argmin_edge": None if rep.argmin is None else [rep.argmin[0] + 1, rep.argmin[1] + 1],
        "holds": rep.holds,
    }
