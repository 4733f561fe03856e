"""Steiner systems S(2, t, n): families of t-subsets of 0..n-1 (blocks) in which
every pair of points lies in exactly one block.

Sources: the projective planes PG(2, q) for q in {2, 3, 4} built from
hard-coded field tables, an exact-cover search for small n, and a plain text
file format for anything larger.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

from .errors import BudgetExceeded, ParameterError, ParseError

# (addition, multiplication) tables indexed by element code 0..q-1.
# GF(4) = {0, 1, a, a+1} coded 0, 1, 2, 3 with a^2 = a + 1.
FIELDS = {
    2: ([[0, 1], [1, 0]],
        [[0, 0], [0, 1]]),
    3: ([[0, 1, 2], [1, 2, 0], [2, 0, 1]],
        [[0, 0, 0], [0, 1, 2], [0, 2, 1]]),
    4: ([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]],
        [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]),
}


@dataclass(frozen=True)
class Design:
    n: int
    t: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def expected_blocks(self):
        if self.t < 2:
            return None
        num, den = comb(self.n, 2), comb(self.t, 2)
        return num // den if num % den == 0 else None


@dataclass
class DesignReport:
    valid: bool
    violations: list[str] = field(default_factory=list)
    overcovered: list[tuple[int, int]] = field(default_factory=list)
    uncovered: list[tuple[int, int]] = field(default_factory=list)


class DesignError(ValueError):
    """A design could not be produced.

    ``reason`` is one of ``"divisibility"``, ``"nonexistent"``, ``"invalid"``.
    """

    def __init__(self, message, reason):
        super().__init__(message)
        self.reason = reason


def make_design(n: int, t: int, blocks) -> Design:
    return Design(n, t, tuple(sorted(tuple(sorted(b)) for b in blocks)))


def validate_design(d: Design) -> DesignReport:
    bad = []
    cover: dict[tuple[int, int], int] = {}
    for b in d.blocks:
        if len(b) != d.t or len(set(b)) != d.t:
            bad.append(f"block {list(b)} does not have {d.t} distinct points")
            continue
        if list(b) != sorted(b):
            bad.append(f"block {list(b)} is not sorted")
        if any(not 0 <= x < d.n for x in b):
            bad.append(f"block {list(b)} has a point outside 0..{d.n - 1}")
            continue
        for p in combinations(sorted(b), 2):
            cover[p] = cover.get(p, 0) + 1
    over = sorted(p for p, c in cover.items() if c > 1)
    under = [p for p in combinations(range(d.n), 2) if p not in cover]
    bad += [f"pair {p} covered {cover[p]} times" for p in over]
    bad += [f"pair {p} not covered" for p in under]
    want = d.expected_blocks
    if want is None:
        bad.append(f"C({d.t},2) does not divide C({d.n},2)")
    elif len(d.blocks) != want:
        bad.append(f"{len(d.blocks)} blocks, expected {want}")
    return DesignReport(not bad, bad, over, under)


def _normalized_vectors(q):
    # nonzero vectors of GF(q)^3 whose first nonzero coordinate is 1
    for vec in product(range(q), repeat=3):
        nz = next((x for x in vec if x), None)
        if nz == 1:
            yield vec


def projective_plane_design(q: int) -> Design:
    """Points and lines of PG(2, q) as an S(2, q+1, q^2+q+1)."""
    if q not in FIELDS:
        raise ParameterError(f"no built-in field of order {q} (have {sorted(FIELDS)})")
    add, mul = FIELDS[q]
    points = list(_normalized_vectors(q))
    index = {p: i for i, p in enumerate(points)}
    blocks = []
    for line in points:
        block = []
        for p in points:
            s = 0
            for a, b in zip(line, p):
                s = add[s][mul[a][b]]
            if s == 0:
                block.append(index[p])
        blocks.append(block)
    d = make_design(len(points), q + 1, blocks)
    rep = validate_design(d)
    if not rep.valid:
        raise AssertionError(f"PG(2,{q}) construction broken: {rep.violations[:3]}")
    return d


def search_design(n: int, t: int, node_budget: int = 1_000_000) -> Design:
    """Exact-cover backtracking over pairs.

    Always covers the lexicographically smallest uncovered pair next, trying
    candidate blocks in lexicographic order. Raises :class:`DesignError` with
    reason ``"divisibility"`` or ``"nonexistent"`` (search exhausted), or
    :class:`BudgetExceeded` when the node budget runs out first.
    """
    if t < 2 or n < t:
        raise ParameterError(f"need 2 <= t <= n, got n={n}, t={t}")
    if comb(n, 2) % comb(t, 2):
        raise DesignError(f"C({t},2) = {comb(t, 2)} does not divide C({n},2) = {comb(n, 2)}",
                          "divisibility")
    if node_budget <= 0:
        raise ParameterError("node budget must be positive")
    covered = [[False] * n for _ in range(n)]
    chosen: list[tuple[int, ...]] = []
    nodes = 0

    def first_uncovered():
        for a in range(n):
            row = covered[a]
            for b in range(a + 1, n):
                if not row[b]:
                    return a, b
        return None

    def candidates(a, b):
        # every point below a is already paired with a, so candidates come out in lex order
        free = [x for x in range(n) if x != a and x != b and not covered[min(a, x)][max(a, x)]
                and not covered[min(b, x)][max(b, x)]]
        for rest in combinations(free, t - 2):
            if all(not covered[x][y] for x, y in combinations(rest, 2)):
                yield tuple(sorted((a, b) + rest))

    def mark(block, value):
        for x, y in combinations(block, 2):
            covered[x][y] = value

    def go():
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"design search S(2,{t},{n}) exceeded {node_budget} nodes",
                                 best=list(chosen))
        pair = first_uncovered()
        if pair is None:
            return True
        for block in candidates(*pair):
            mark(block, True)
            chosen.append(block)
            if go():
                return True
            chosen.pop()
            mark(block, False)
        return False

    if not go():
        raise DesignError(f"exhaustive search: no S(2,{t},{n}) exists", "nonexistent")
    d = make_design(n, t, chosen)
    assert validate_design(d).valid
    return d


def permute_design(d: Design, perm) -> Design:
    """Apply a bijection ``perm`` (sequence, perm[i] = image of i) to every block."""
    perm = list(perm)
    if len(perm) != d.n:
        raise ParameterError(f"permutation has size {len(perm)}, design has {d.n} points")
    if sorted(perm) != list(range(d.n)):
        raise ParameterError("not a permutation of 0..n-1")
    return make_design(d.n, d.t, ([perm[x] for x in b] for b in d.blocks))


def serialize_design(d: Design) -> str:
    lines = [f"design {d.n} {d.t} {len(d.blocks)}"]
    lines += [" ".join(str(x + 1) for x in b) for b in d.blocks]
    return "\n".join(lines) + "\n"


def parse_design(text: str) -> Design:
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise ParseError("empty design file")
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 4 or parts[0] != "design":
        raise ParseError(f"expected 'design <n> <t> <b>', got {head!r}", lineno)
    try:
        n, t, b = (int(x) for x in parts[1:])
    except ValueError:
        raise ParseError(f"non-integer header field in {head!r}", lineno) from None
    body = lines[1:]
    if len(body) != b:
        raise ParseError(f"header announces {b} blocks, found {len(body)}")
    blocks = []
    for lineno, ln in body:
        try:
            pts = [int(x) for x in ln.split()]
        except ValueError:
            raise ParseError(f"non-integer point in {ln!r}", lineno) from None
        if len(pts) != t:
            raise ParseError(f"block has {len(pts)} points, expected {t}", lineno)
        if pts != sorted(pts) or len(set(pts)) != t:
            raise ParseError("block points must be distinct and ascending", lineno)
        if pts[0] < 1 or pts[-1] > n:
            raise ParseError(f"point out of range 1..{n}", lineno)
        blocks.append([x - 1 for x in pts])
    d = make_design(n, t, blocks)
    rep = validate_design(d)
    if not rep.valid:
        if rep.uncovered:
            a, c = rep.uncovered[0]
            raise DesignError(f"pair {{{a + 1}, {c + 1}}} is not covered by any block", "invalid")
        if rep.overcovered:
            a, c = rep.overcovered[0]
            raise DesignError(f"pair {{{a + 1}, {c + 1}}} is covered more than once", "invalid")
        raise DesignError("; ".join(rep.violations), "invalid")
    return d


def read_design(path) -> Design:
    with open(path, encoding="utf-8") as fh:
        return parse_design(fh.read())


def design_to_json(d: Design) -> dict:
    return {"n": d.n, "t": d.t, "blocks": [[x + 1 for x in b] for b in d.blocks]}
