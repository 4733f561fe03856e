"""Blow-ups of K_{k-1} into regular graphs.

Each vertex of K_{k-1} is replaced by a copy of a regular graph H and all
pairs between different copies become edges. By pigeonhole, every K_k then
uses an edge inside some copy. So the fractional K_k-packing number is at
most the number of such intra-copy edges, well below e(G)/C(k,2) although
the minimum degree is about n(1 - 1/(k+1)).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor

import numpy as np

from .errors import ParameterError, SolverError
from .graph import Graph, canon, enumerate_cliques, min_degree


@dataclass
class BlowupSpec:
    k: int
    part_size: int
    part_graph: Graph
    s: int | None = None
    eps: Fraction | None = None
    d: int | None = None

    @property
    def n(self) -> int:
        return (self.k - 1) * self.part_size

    def part_of(self, v: int) -> int:
        return v // self.part_size


@dataclass
class ExtremalReport:
    k: int
    n: int
    min_degree: int
    edge_count: int
    intra_edge_count: int
    structural_bound: int
    target: Fraction
    deficiency: Fraction
    premise_checked: bool
    lp_value: Fraction | float | None = None
    lp_mode: str | None = None


class SamplerError(RuntimeError):
    pass


def random_regular(nv: int, deg: int, seed: int = 0, max_attempts: int = 1000) -> Graph:
    """Uniform-ish simple ``deg``-regular graph from the pairing model.

    Stubs are shuffled and paired; pairs forming loops or repeated edges are
    returned to the pool and re-paired. If the pool gets stuck (only
    unusable pairs remain) the attempt is discarded and a fresh pairing is
    started, up to ``max_attempts`` times.
    """
    if nv <= 0 or not 0 <= deg < nv:
        raise ParameterError(f"need 0 <= deg < nv, got nv={nv}, deg={deg}")
    if nv * deg % 2:
        raise ParameterError(f"nv * deg = {nv * deg} is odd")
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(max_attempts):
        edges = _try_pairing(nv, deg, rng)
        if edges is not None:
            return Graph(nv, edges)
    raise SamplerError(f"no simple {deg}-regular graph on {nv} vertices after {max_attempts} attempts")


def _try_pairing(nv, deg, rng):
    edges: set = set()
    stubs = [v for v in range(nv) for _ in range(deg)]
    while stubs:
        order = rng.permutation(len(stubs))
        pool = [stubs[i] for i in order]
        left = []
        for a, b in zip(pool[::2], pool[1::2]):
            e = canon(int(a), int(b))
            if a != b and e not in edges:
                edges.add(e)
            else:
                left += [a, b]
        if len(left) == len(stubs):
            # stuck unless some pair among the leftovers is still usable
            verts = sorted(set(left))
            if not any(a != b and canon(a, b) not in edges for i, a in enumerate(verts) for b in verts[i + 1:]):
                return None
        stubs = left
    return sorted(edges)


def circulant(nv: int, offsets) -> Graph:
    """Circulant graph: i ~ i +- o (mod nv) for each offset o."""
    es = set()
    for i in range(nv):
        for o in offsets:
            if not 0 < o < nv:
                raise ParameterError(f"offset {o} outside 1..{nv - 1}")
            j = (i + o) % nv
            es.add(canon(i, j))
    return Graph(nv, es)


def regular_circulant(nv: int, deg: int) -> Graph:
    """Deterministic ``deg``-regular graph on ``nv`` vertices."""
    if nv * deg % 2 or not 0 <= deg < nv:
        raise ParameterError(f"no {deg}-regular graph on {nv} vertices")
    offsets = list(range(1, deg // 2 + 1))
    if deg % 2:
        offsets.append(nv // 2)
    return circulant(nv, offsets)


def blow_up(k: int, part_graph: Graph) -> tuple[Graph, BlowupSpec]:
    if k < 3:
        raise ParameterError("blow-up needs k >= 3")
    p = part_graph.n
    edges = []
    for i in range(k - 1):
        edges += [(i * p + a, i * p + b) for a, b in part_graph.edges]
    for i in range(k - 1):
        for j in range(i + 1, k - 1):
            edges += [(i * p + a, j * p + b) for a in range(p) for b in range(p)]
    return Graph((k - 1) * p, edges), BlowupSpec(k, p, part_graph)


def scaled_parameters(k: int, s: int, eps) -> dict:
    """Part size 2s(k^3-k), degree 4s(k^2-k) - d with d = floor(eps * 2s(k^3-k)(k-1))."""
    eps = Fraction(eps)
    part = 2 * s * (k ** 3 - k)
    d = floor(eps * part * (k - 1))
    deg = 4 * s * (k * k - k) - d
    n = part * (k - 1)
    return {"k": k, "s": s, "eps": eps, "part_size": part, "d": d, "degree": deg, "n": n,
            "min_degree": deg + part * (k - 2)}


def scaled_report(k: int, s: int, eps) -> ExtremalReport:
    """Report for the parameterized instance computed from the counts alone (no graph)."""
    prm = scaled_parameters(k, s, eps)
    part, deg, n = prm["part_size"], prm["degree"], prm["n"]
    intra = (k - 1) * part * deg // 2
    total = part * part * comb(k - 1, 2) + intra
    return _report(k, n, prm["min_degree"], total, intra, premise_checked=False)


def scaled_instance(k: int, s: int, eps, seed: int = 0) -> tuple[Graph, BlowupSpec]:
    prm = scaled_parameters(k, s, eps)
    try:
        h = random_regular(prm["part_size"], prm["degree"], seed)
    except SamplerError:
        h = regular_circulant(prm["part_size"], prm["degree"])
    g, spec = blow_up(k, h)
    spec.s, spec.eps, spec.d = s, prm["eps"], prm["d"]
    return g, spec


def _report(k, n, mindeg, total, intra, premise_checked, lp_value=None, lp_mode=None):
    target = Fraction(total, comb(k, 2))
    deficiency = 1 - intra / target if target else Fraction(0)
    return ExtremalReport(k, n, mindeg, total, intra, intra, target, max(deficiency, Fraction(0)),
                          premise_checked, lp_value, lp_mode)


def intra_edges(g: Graph, spec: BlowupSpec) -> int:
    return sum(1 for a, b in g.edges if spec.part_of(a) == spec.part_of(b))


def structural_bound_report(g: Graph, spec: BlowupSpec, check_limit: int = 200_000,
                            lp: str | None = None) -> ExtremalReport:
    """Intra-part edge bound on the fractional K_k-packing number.

    The pigeonhole premise is confirmed by enumerating all k-cliques when
    C(n, k) <= ``check_limit``. ``lp`` may be ``"exact"`` or ``"float"`` to also
    solve the packing LP.
    """
    from .fracpack import fractional_packing_number

    k = spec.k
    premise = False
    if comb(g.n, k) <= check_limit:
        for c in enumerate_cliques(g, k):
            parts = [spec.part_of(v) for v in c]
            if len(set(parts)) == len(parts):
                raise SolverError(f"clique {c} avoids every part edge; not a valid blow-up")
        premise = True
    lp_value = None
    if lp is not None:
        lp_value = fractional_packing_number(g, k, exact=(lp == "exact")).lp_value
    return _report(k, g.n, min_degree(g) if g.n else 0, g.m, intra_edges(g, spec), premise, lp_value, lp)


def report_to_json(rep: ExtremalReport) -> dict:
    out = {
        "k": rep.k,
        "n": rep.n,
        "min_degree": rep.min_degree,
        "edge_count": rep.edge_count,
        "intra_edge_count": rep.intra_edge_count,
        "structural_bound": str(rep.structural_bound),
        "target": str(rep.target),
        "deficiency": str(rep.deficiency),
        "premise_checked": rep.premise_checked,
    }
    if rep.lp_mode is not None:
        out["lp_mode"] = rep.lp_mode
        out["lp_value"] = str(rep.lp_value) if rep.lp_mode == "exact" else repr(float(rep.lp_value))
    return out
