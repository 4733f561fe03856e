"""Decomposition of a dense graph into copies of K_k, K_t and K_t^- (t = 2k - 1).

Pipeline:

1. ``preprocess`` peels vertices off until n = 1 (mod t(t-1)). Each peeled
   vertex has its star absorbed by tiling its neighbourhood with K_{k-1}'s
   and K_{3k-4}'s.
2. ``sample_partition`` relabels a fixed S(2, t, n) design by a random
   permutation. The blocks then cut the graph into induced pieces
   ("elements"). Edges of non-complete elements are the bad edges.
3. ``select_good_sets`` gives each bad edge e a K_k made of e plus one edge
   from each of r = C(k,2) - 1 distinct, so far unused, complete elements.
4. ``assemble`` emits that K_k, turns each borrowed element into a K_t^-,
   and keeps the untouched complete elements as K_t.

The degree and saturation thresholds from the asymptotic argument
(6n/k^7 and n/(2k)) are the defaults, clamped to at least 1. At the sizes
this code can handle, the asymptotic guarantees do not apply, so success is
empirical and every failure is reported with the stage that produced it.
"""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Iterator, Union

import numpy as np

from .designs import Design, DesignError, permute_design
from .errors import BudgetExceeded, ParameterError
from .graph import Edge, Graph, canon, cliques_containing_edge, clique_edges, min_degree

KK, KT, KT_MINUS = "Kk", "Kt", "KtMinus"


class DegreeThresholdWarning(UserWarning):
    pass


@dataclass
class DecomposerConfig:
    k: int = 3
    maxdeg_cap: int | None = None
    saturation_cap: int | None = None
    sample_attempts: int = 100
    rng_seed: int = 0
    keep_near_kt: bool = False
    tiling_budget: int = 100_000

    def __post_init__(self):
        if self.k < 3:
            raise ParameterError("the decomposer needs k >= 3")
        for name in ("maxdeg_cap", "saturation_cap"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ParameterError(f"{name} must be nonnegative")
        if self.sample_attempts < 0:
            raise ParameterError("sample_attempts must be nonnegative")

    @property
    def t(self) -> int:
        return 2 * self.k - 1

    @property
    def r(self) -> int:
        return comb(self.k, 2) - 1

    def maxdeg_for(self, n: int) -> int:
        if self.maxdeg_cap is not None:
            return self.maxdeg_cap
        return max(1, 6 * n // self.k ** 7)

    def saturation_for(self, n: int) -> int:
        if self.saturation_cap is not None:
            return self.saturation_cap
        return max(1, n // (2 * self.k))


@dataclass(frozen=True)
class Part:
    tag: str
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    source: tuple = ()  # ("bad-edge", (u, v)) | ("element", index) | ("preprocess", vertex)


@dataclass
class Element:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    complete: bool

    def near_complete(self, t: int) -> bool:
        return len(self.edges) == comb(t, 2) - 1


@dataclass
class Partition:
    t: int
    elements: list[Element]
    bad_edges: list[Edge]
    permutation: tuple[int, ...]
    edge_element: dict[Edge, int]
    attempt: int = -1
    above_cap: bool = False
    max_bad_degree: int = 0

    def routed_bad_edges(self, keep_near_kt: bool) -> list[Edge]:
        """Bad edges that must be absorbed by K_k's.

        With ``keep_near_kt`` the edges of incomplete elements that already are
        K_t^- stay inside their element and are not routed.
        """
        if not keep_near_kt:
            return self.bad_edges
        return sorted(e for el in self.elements
                      if not el.complete and not el.near_complete(self.t) for e in el.edges)


@dataclass
class Choice:
    bad_edge: Edge
    clique: tuple[int, ...]
    elements: tuple[int, ...]   # element indices, aligned with borrowed
    borrowed: tuple[Edge, ...]  # f_1..f_r


@dataclass
class GoodSetAssignment:
    choices: list[Choice]
    saturation_cap: int
    absorbed: list[int]
    diagnostics: dict[str, int] = field(default_factory=dict)
    per_edge: dict[Edge, dict[str, int]] = field(default_factory=dict)


@dataclass
class DecompositionCertificate:
    k: int
    parts: list[Part]
    meta: dict = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict, repr=False)

    def counts(self) -> dict[str, int]:
        out = {KK: 0, KT: 0, KT_MINUS: 0}
        for p in self.parts:
            out[p.tag] += 1
        return out


class DecompositionFailure(RuntimeError):
    def __init__(self, stage: str, message: str, details: dict | None = None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.message = message
        self.details = details or {}


class SelectionFailure(DecompositionFailure):
    def __init__(self, edge: Edge, diagnostics: dict[str, int], done: int):
        super().__init__(
            "selection",
            f"no acceptable K_k for bad edge {edge} after {done} successful selections",
            {"edge": [edge[0] + 1, edge[1] + 1], "rejections": diagnostics, "completed": done},
        )
        self.edge = edge


# ---------------------------------------------------------------- preprocessing

def _representable(count: int, a: int, b: int) -> bool:
    return any((count - b * j) % a == 0 for j in range(count // b + 1))


def tile_neighborhood(g: Graph, nbrs: list[int], k: int, budget: int) -> list[tuple[int, ...]]:
    """Cover ``nbrs`` by vertex-disjoint cliques of order k-1 or 3k-4.

    Backtracks on the smallest uncovered vertex, trying (k-1)-cliques before
    (3k-4)-cliques, each in lexicographic order. Returns the list of clique
    vertex tuples, or raises :class:`DecompositionFailure`.
    """
    small, big = k - 1, 3 * k - 4
    nodes = 0

    def cliques_from(x: int, rest: int, size: int):
        # size-cliques containing x, other members drawn from ``rest`` (bitset above x)
        def ext(prefix, cand, need):
            if need == 0:
                yield tuple(prefix)
                return
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                yield from ext(prefix + [v], cand & g.adj[v], need - 1)

        return ext([x], rest & g.adj[x], size - 1)

    def go(free: int, count: int, acc: list):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("neighbourhood tiling exceeded its node budget")
        if free == 0:
            return True
        low = free & -free
        x = low.bit_length() - 1
        rest = free ^ low
        for size in (small, big):
            if size > count or not _representable(count - size, small, big):
                continue
            for c in cliques_from(x, rest, size):
                mask = 0
                for v in c:
                    mask |= 1 << v
                acc.append(c)
                if go(free & ~mask, count - size, acc):
                    return True
                acc.pop()
        return False

    free = 0
    for v in nbrs:
        free |= 1 << v
    acc: list[tuple[int, ...]] = []
    try:
        ok = _representable(len(nbrs), small, big) and go(free, len(nbrs), acc)
    except BudgetExceeded:
        ok = None
    if not ok:
        why = "budget exhausted" if ok is None else "no tiling exists"
        raise DecompositionFailure(
            "preprocess",
            f"cannot tile a neighbourhood of size {len(nbrs)} by K_{small}'s and K_{big}'s ({why})",
        )
    return acc


def absorb_star(v: int, tiles: list[tuple[int, ...]], k: int) -> list[Part]:
    """Parts covering every edge at ``v`` given a tiling of its neighbourhood."""
    parts = []
    for tile in tiles:
        h = sorted(tile)
        if len(h) == k - 1:
            verts = tuple(sorted([v] + h))
            parts.append(Part(KK, verts, tuple(clique_edges(verts)), ("preprocess", v)))
        else:
            kk = tuple(sorted([v] + h[:k - 1]))
            parts.append(Part(KK, kk, tuple(clique_edges(kk)), ("preprocess", v)))
            kt = tuple(sorted([v, h[0]] + h[k - 1:]))
            missing = canon(v, h[0])
            parts.append(Part(KT_MINUS, kt, tuple(e for e in clique_edges(kt) if e != missing),
                              ("preprocess", v)))
    return parts


@dataclass
class Preprocessed:
    graph: Graph
    parts: list[Part]
    removed: list[int]
    labels: list[int]  # reduced vertex index -> original vertex


def preprocess(g: Graph, cfg: DecomposerConfig) -> Preprocessed:
    t = cfg.t
    mod = t * (t - 1)
    labels = list(range(g.n))
    edges = set(g.edges)  # in original labels
    parts: list[Part] = []
    removed: list[int] = []
    while len(labels) % mod != 1:
        if len(removed) >= mod - 1:
            raise DecompositionFailure("preprocess", "vertex removal did not reach n = 1 mod t(t-1)")
        if not labels:
            raise DecompositionFailure("preprocess", "ran out of vertices")
        cur = Graph(len(labels), _relabel(edges, labels))
        degs = cur.degrees()
        vi = min(range(cur.n), key=lambda i: (degs[i], i))
        nbrs = cur.neighbors(vi)
        tiles = tile_neighborhood(cur, nbrs, cfg.k, cfg.tiling_budget)
        v = labels[vi]
        new_parts = absorb_star(v, [tuple(labels[x] for x in tile) for tile in tiles], cfg.k)
        for p in new_parts:
            edges.difference_update(p.edges)
        parts += new_parts
        removed.append(v)
        labels.pop(vi)
    return Preprocessed(Graph(len(labels), _relabel(edges, labels)), parts, removed, labels)


def _relabel(edges, labels):
    pos = {v: i for i, v in enumerate(labels)}
    return [(pos[a], pos[b]) for a, b in edges if a in pos and b in pos]


# ---------------------------------------------------------------- partition

def fisher_yates(rng: np.random.Generator, n: int) -> tuple[int, ...]:
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        perm[i], perm[j] = perm[j], perm[i]
    return tuple(perm)


def partition_graph(g: Graph, d: Design, perm=None) -> Partition:
    if d.n != g.n:
        raise ParameterError(f"design has {d.n} points, graph has {g.n} vertices")
    perm = tuple(range(g.n)) if perm is None else tuple(perm)
    dp = permute_design(d, perm)
    full = comb(d.t, 2)
    elements, bad, where = [], [], {}
    for i, block in enumerate(dp.blocks):
        es = tuple(g.induced_edges(block))
        complete = len(es) == full
        elements.append(Element(block, es, complete))
        for e in es:
            where[e] = i
        if not complete:
            bad.extend(es)
    return Partition(d.t, elements, sorted(bad), perm, where)


def bad_degree(part: Partition, n: int, keep_near_kt: bool = False) -> int:
    deg = [0] * n
    for a, b in part.routed_bad_edges(keep_near_kt):
        deg[a] += 1
        deg[b] += 1
    return max(deg, default=0)


def candidate_partitions(g: Graph, d: Design, cfg: DecomposerConfig) -> Iterator[Partition]:
    """Partitions from the seeded permutation stream, best first.

    Draws within ``maxdeg_cap`` come out in draw order as soon as they are
    found; the remaining draws follow, sorted by maximum bad-edge degree
    (earlier draw first on ties) and tagged ``above_cap``. With
    ``sample_attempts == 0`` the identity permutation is the only candidate.
    """
    cap = cfg.maxdeg_for(g.n)
    if cfg.sample_attempts == 0:
        part = partition_graph(g, d)
        part.max_bad_degree = bad_degree(part, g.n, cfg.keep_near_kt)
        part.above_cap = part.max_bad_degree > cap
        yield part
        return
    rng = np.random.Generator(np.random.PCG64(cfg.rng_seed))
    over = []
    for attempt in range(cfg.sample_attempts):
        part = partition_graph(g, d, fisher_yates(rng, g.n))
        part.attempt = attempt
        part.max_bad_degree = bad_degree(part, g.n, cfg.keep_near_kt)
        if part.max_bad_degree <= cap:
            yield part
        else:
            part.above_cap = True
            over.append(part)
    over.sort(key=lambda p: (p.max_bad_degree, p.attempt))
    yield from over


def sample_partition(g: Graph, d: Design, cfg: DecomposerConfig) -> Partition:
    """First uniformly random relabelling whose bad-edge graph respects ``maxdeg_cap``.

    With ``sample_attempts == 0`` the identity is used. If no draw meets the
    cap the draw with the smallest maximum degree is returned with
    ``above_cap`` set.
    """
    return next(candidate_partitions(g, d, cfg))


# ---------------------------------------------------------------- good sets

REJECTIONS = ("a2_same_element", "a3_bad_edge", "a4_used_element", "a5_saturated")


def select_good_sets(g: Graph, part: Partition, cfg: DecomposerConfig) -> GoodSetAssignment:
    """Greedy choice of pairwise disjoint good sets, bad edges in lexicographic order.

    A candidate K_k through the bad edge e = (u, v) is rejected if two of its
    other edges share an element (a2), one of them lies outside the complete
    elements (a3), one of its elements was already borrowed (a4), or accepting
    it would push the absorbed-edge count of a vertex other than u, v above the
    saturation cap (a5). Absorbed edges of a vertex are the borrowed edges
    f_1..f_r incident to it.
    """
    k, r = cfg.k, cfg.r
    cap = cfg.saturation_for(g.n)
    complete = [el.complete for el in part.elements]
    used: set[int] = set()
    absorbed = [0] * g.n
    totals = {"a1_candidates": 0, **{name: 0 for name in REJECTIONS}}
    per_edge: dict[Edge, dict[str, int]] = {}
    choices: list[Choice] = []
    for e in part.routed_bad_edges(cfg.keep_near_kt):
        u, v = e
        stats = {"a1_candidates": 0, **{name: 0 for name in REJECTIONS}}
        per_edge[e] = stats
        picked = None
        for c in cliques_containing_edge(g, e, k):
            stats["a1_candidates"] += 1
            others = [f for f in clique_edges(c) if f != e]
            elts = [part.edge_element[f] for f in others]
            if len(set(elts)) < r:
                stats["a2_same_element"] += 1
                continue
            if not all(complete[x] for x in elts):
                stats["a3_bad_edge"] += 1
                continue
            if any(x in used for x in elts):
                stats["a4_used_element"] += 1
                continue
            # every vertex of c except u, v meets k-1 borrowed edges
            if any(absorbed[x] + k - 1 > cap for x in c if x != u and x != v):
                stats["a5_saturated"] += 1
                continue
            picked = Choice(e, c, tuple(elts), tuple(others))
            break
        for name, val in stats.items():
            totals[name] += val
        if picked is None:
            raise SelectionFailure(e, stats, len(choices))
        used.update(picked.elements)
        for x in picked.clique:
            if x != u and x != v:
                absorbed[x] += k - 1
        choices.append(picked)
    return GoodSetAssignment(choices, cap, absorbed, totals, per_edge)


# ---------------------------------------------------------------- assembly

class AssemblyError(DecompositionFailure):
    def __init__(self, message):
        super().__init__("assembly", message)


def assemble(part: Partition, sel: GoodSetAssignment, absorbed_parts=(), keep_near_kt: bool = False) -> list[Part]:
    t = part.t
    parts: list[Part] = []
    borrowed: dict[int, Edge] = {}
    for ch in sel.choices:
        verts = tuple(sorted(ch.clique))
        parts.append(Part(KK, verts, tuple(clique_edges(verts)), ("bad-edge", ch.bad_edge)))
        for idx, f in zip(ch.elements, ch.borrowed):
            if idx in borrowed:
                raise AssemblyError(f"element {idx} borrowed twice")
            borrowed[idx] = f
    routed = set(part.routed_bad_edges(keep_near_kt))
    covered = {ch.bad_edge for ch in sel.choices}
    if covered != routed:
        missing = sorted(routed - covered)
        raise AssemblyError(f"bad edges without a K_k: {missing[:5]}")
    for idx, el in enumerate(part.elements):
        if el.complete:
            if idx in borrowed:
                f = borrowed[idx]
                parts.append(Part(KT_MINUS, el.vertices, tuple(x for x in el.edges if x != f), ("element", idx)))
            else:
                parts.append(Part(KT, el.vertices, el.edges, ("element", idx)))
        else:
            if idx in borrowed:
                raise AssemblyError(f"incomplete element {idx} was borrowed from")
            if keep_near_kt and el.near_complete(t):
                parts.append(Part(KT_MINUS, el.vertices, el.edges, ("element", idx)))
            elif not set(el.edges) <= covered:
                raise AssemblyError(f"incomplete element {idx} has edges outside every K_k")
    seen: set[Edge] = set()
    for p in parts:
        for e in p.edges:
            if e in seen:
                raise AssemblyError(f"edge {e} used twice")
            seen.add(e)
    return parts + list(absorbed_parts)


# ---------------------------------------------------------------- driver

def degree_threshold(n: int, k: int) -> Fraction:
    return n * (1 - Fraction(1, 9 * k ** 10))


DesignSource = Union[Design, Callable[[int, int], Design]]


def decompose(g: Graph, cfg: DecomposerConfig, design: DesignSource) -> DecompositionCertificate:
    from .verify import verify_certificate

    timings: dict[str, float] = {}
    clock = time.perf_counter()

    def lap(name):
        nonlocal clock
        now = time.perf_counter()
        timings[name] = now - clock
        clock = now

    below = g.n > 0 and min_degree(g) < degree_threshold(g.n, cfg.k)
    if below:
        warnings.warn("minimum degree is below n(1 - 1/9k^10); success is not guaranteed",
                      DegreeThresholdWarning, stacklevel=2)
    # the reduced order depends on n alone, so an impossible design is known up front
    mod = cfg.t * (cfg.t - 1)
    target_n = g.n - (g.n - 1) % mod if g.n else 0
    if target_n < cfg.t:
        raise DecompositionFailure(
            "design", f"n={g.n} reduces to {target_n} < t={cfg.t}; no S(2,{cfg.t},{target_n}) exists",
            {"reason": "nonexistent", "reduced_n": target_n})
    pre = preprocess(g, cfg)
    lap("preprocess")
    h = pre.graph
    if callable(design):
        try:
            d = design(h.n, cfg.t)
        except DesignError as exc:
            raise DecompositionFailure("design", str(exc), {"reason": exc.reason}) from exc
        except (BudgetExceeded, ParameterError) as exc:
            raise DecompositionFailure("design", str(exc)) from exc
    else:
        d = design
    if d.n != h.n or d.t != cfg.t:
        raise DecompositionFailure(
            "design", f"need an S(2,{cfg.t},{h.n}) design, got S(2,{d.t},{d.n})")
    lap("design")
    # a selection failure moves on to the next sampled permutation
    failures = []
    for part in candidate_partitions(h, d, cfg):
        try:
            sel = select_good_sets(h, part, cfg)
            break
        except SelectionFailure as exc:
            failures.append(exc)
    else:
        last = failures[-1]
        raise DecompositionFailure(
            "selection", f"all {len(failures)} sampled permutations failed; last: {last.message}",
            {**last.details, "permutations_tried": len(failures)},
        )
    lap("partition+selection")
    reduced_parts = assemble(part, sel, keep_near_kt=cfg.keep_near_kt)
    lap("assembly")

    lab = pre.labels

    def up(p: Part) -> Part:
        vs = tuple(sorted(lab[x] for x in p.vertices))
        es = tuple(sorted(canon(lab[a], lab[b]) for a, b in p.edges))
        src = p.source
        if src and src[0] == "bad-edge":
            src = ("bad-edge", canon(lab[src[1][0]], lab[src[1][1]]))
        return Part(p.tag, vs, es, src)

    parts = [up(p) for p in reduced_parts] + pre.parts
    meta = {
        "seed": cfg.rng_seed,
        "t": cfg.t,
        "r": cfg.r,
        "maxdeg_cap": cfg.maxdeg_for(h.n),
        "saturation_cap": sel.saturation_cap,
        "sample_attempts": cfg.sample_attempts,
        "keep_near_kt": cfg.keep_near_kt,
        "removed_vertices": [v + 1 for v in pre.removed],
        "reduced_n": h.n,
        "permutation_attempt": part.attempt,
        "failed_permutations": len(failures),
        "bad_edges": len(part.bad_edges),
        "routed_bad_edges": len(part.routed_bad_edges(cfg.keep_near_kt)),
        "max_bad_degree": part.max_bad_degree,
        "above_maxdeg_cap": part.above_cap,
        "below_degree_threshold": below,
        "rejections": sel.diagnostics,
    }
    cert = DecompositionCertificate(cfg.k, parts, meta, timings)
    rep = verify_certificate(g, cert, cfg.k)
    lap("verification")
    if not rep.valid:
        raise DecompositionFailure("verification", "; ".join(rep.violations[:5]))
    return cert


def certificate_to_json(cert: DecompositionCertificate) -> dict:
    parts = sorted(cert.parts, key=lambda p: (p.tag, p.vertices, p.edges))
    return {
        "k": cert.k,
        "parts": [
            {
                "tag": p.tag,
                "vertices": [v + 1 for v in p.vertices],
                "edges": [[a + 1, b + 1] for a, b in p.edges],
                "source": _source_to_json(p.source),
            }
            for p in parts
        ],
        "meta": cert.meta,
    }


def certificate_from_json(obj: dict) -> DecompositionCertificate:
    from .errors import ParseError

    try:
        parts = [
            Part(item["tag"], tuple(v - 1 for v in item["vertices"]),
                 tuple(canon(a - 1, b - 1) for a, b in item["edges"]), _source_from_json(item.get("source")))
            for item in obj["parts"]
        ]
        return DecompositionCertificate(int(obj["k"]), parts, dict(obj.get("meta", {})))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate: {exc}") from None


def _source_to_json(src) -> dict | None:
    if not src:
        return None
    kind, data = src
    if kind == "bad-edge":
        return {"kind": kind, "edge": [data[0] + 1, data[1] + 1]}
    if kind == "element":
        return {"kind": kind, "index": data}
    return {"kind": kind, "vertex": data + 1}


def _source_from_json(obj) -> tuple:
    if not obj:
        return ()
    kind = obj["kind"]
    if kind == "bad-edge":
        a, b = obj["edge"]
        return (kind, canon(a - 1, b - 1))
    if kind == "element":
        return (kind, int(obj["index"]))
    return (kind, int(obj["vertex"]) - 1)
