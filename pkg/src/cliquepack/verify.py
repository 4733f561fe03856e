"""Independent checkers for decomposition certificates and integral packings.

Everything here is recomputed from the host graph and the claimed parts; no
code is shared with the construction side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb


@dataclass
class CertificateReport:
    valid: bool
    violations: list[str] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    edges_covered: int = 0


def verify_certificate(g, cert, k: int) -> CertificateReport:
    """Check that ``cert.parts`` is a {K_k, K_t, K_t^-}-decomposition of ``g``."""
    t = 2 * k - 1
    bad: list[str] = []
    if cert.k != k:
        bad.append(f"certificate is for k={cert.k}, expected k={k}")
    host = {(a, b) if a < b else (b, a) for a, b in g.edges}
    owner: dict[tuple[int, int], int] = {}
    counts = {"Kk": 0, "Kt": 0, "KtMinus": 0}
    for i, part in enumerate(cert.parts):
        tag = part.tag
        verts = set(part.vertices)
        es = [(a, b) if a < b else (b, a) for a, b in part.edges]
        if tag not in counts:
            bad.append(f"part {i}: unknown tag {tag!r}")
            continue
        counts[tag] += 1
        size = k if tag == "Kk" else t
        if len(verts) != size or len(part.vertices) != size:
            bad.append(f"part {i} ({tag}): {len(part.vertices)} vertices, expected {size}")
        if len(set(es)) != len(es):
            bad.append(f"part {i} ({tag}): repeats an edge")
        for a, b in es:
            if a == b or a not in verts or b not in verts:
                bad.append(f"part {i} ({tag}): edge {(a, b)} leaves its vertex set")
        absent = [p for p in combinations(sorted(verts), 2) if p not in set(es)]
        want_absent = 1 if tag == "KtMinus" else 0
        if len(absent) != want_absent or len(set(es)) != comb(len(verts), 2) - want_absent:
            bad.append(f"part {i} ({tag}): {len(absent)} absent pairs, expected {want_absent}")
        for e in es:
            if e not in host:
                bad.append(f"part {i} ({tag}): {e} is not an edge of the graph")
            elif e in owner:
                bad.append(f"edge {e} covered by parts {owner[e]} and {i}")
            else:
                owner[e] = i
    missing = sorted(host - set(owner))
    bad += [f"edge {e} not covered by any part" for e in missing]
    return CertificateReport(not bad, bad, counts, len(owner))


def verify_integral_packing(g, k: int, copies) -> CertificateReport:
    """Every copy is a k-clique of ``g`` and no edge is used twice."""
    bad: list[str] = []
    host = set(g.edges)
    used: dict[tuple[int, int], int] = {}
    for i, c in enumerate(copies):
        if len(set(c)) != k or len(c) != k:
            bad.append(f"copy {i} does not have {k} distinct vertices")
            continue
        for e in combinations(sorted(c), 2):
            if e not in host:
                bad.append(f"copy {i}: {e} is not an edge")
            elif e in used:
                bad.append(f"edge {e} used by copies {used[e]} and {i}")
            else:
                used[e] = i
    return CertificateReport(not bad, bad, {"copies": len(copies)}, len(used))
