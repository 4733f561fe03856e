from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from cliquepack.designs import (
    Design,
    DesignError,
    design_to_json,
    make_design,
    parse_design,
    permute_design,
    projective_plane_design,
    search_design,
    serialize_design,
    validate_design,
)
from cliquepack.errors import BudgetExceeded, ParameterError, ParseError


def pair_counts(d):
    counts = {p: 0 for p in combinations(range(d.n), 2)}
    for b in d.blocks:
        for p in combinations(b, 2):
            counts[p] += 1
    return counts


@pytest.mark.parametrize("q, n, t", [(2, 7, 3), (3, 13, 4), (4, 21, 5)])
def test_projective_planes(q, n, t):
    d = projective_plane_design(q)
    assert (d.n, d.t, len(d.blocks)) == (n, t, n)
    assert set(pair_counts(d).values()) == {1}
    assert validate_design(d).valid


@pytest.mark.parametrize("q", [0, 5, 7])
def test_unsupported_order(q):
    with pytest.raises(ParameterError):
        projective_plane_design(q)


def test_search_finds_fano():
    d = search_design(7, 3)
    assert len(d.blocks) == 7 and set(pair_counts(d).values()) == {1}
    assert search_design(7, 3) == d


def test_search_proves_nonexistence():
    with pytest.raises(DesignError) as info:
        search_design(6, 3)
    assert info.value.reason == "nonexistent"


def test_search_divisibility_first():
    with pytest.raises(DesignError) as info:
        search_design(5, 4, node_budget=1)
    assert info.value.reason == "divisibility"


def test_search_budget():
    with pytest.raises(BudgetExceeded):
        search_design(13, 4, node_budget=2)


@pytest.mark.parametrize("n, t", [(9, 3), (13, 3), (13, 4)])
def test_search_other_sizes(n, t):
    d = search_design(n, t)
    assert validate_design(d).valid and len(d.blocks) == d.expected_blocks


def test_validator_examples():
    fano = projective_plane_design(2)
    dup = Design(7, 3, fano.blocks + fano.blocks[:1])
    rep = validate_design(dup)
    assert not rep.valid and len(rep.overcovered) == 3
    assert validate_design(Design(1, 3, ())).valid


def test_validator_reports_uncovered():
    fano = projective_plane_design(2)
    rep = validate_design(Design(7, 3, fano.blocks[1:]))
    assert not rep.valid and len(rep.uncovered) == 3


def test_permute_examples():
    fano = projective_plane_design(2)
    assert permute_design(fano, range(7)) == fano
    pg4 = projective_plane_design(4)
    rev = permute_design(pg4, list(reversed(range(21))))
    assert len(rev.blocks) == 21 and validate_design(rev).valid
    with pytest.raises(ParameterError):
        permute_design(fano, range(6))


@given(st.permutations(range(13)))
def test_permutation_preserves_design(perm):
    d = projective_plane_design(3)
    p = permute_design(d, perm)
    assert validate_design(p).valid
    inverse = [0] * 13
    for i, x in enumerate(perm):
        inverse[x] = i
    assert permute_design(p, inverse) == d


def test_text_round_trip():
    fano = projective_plane_design(2)
    text = serialize_design(fano)
    assert text.splitlines()[0] == "design 7 3 7"
    assert parse_design(text) == fano
    assert serialize_design(parse_design(text)) == text


def test_parse_names_missing_pair():
    fano = projective_plane_design(2)
    lines = serialize_design(fano).splitlines()
    lines[0] = "design 7 3 6"
    text = "\n".join(lines[:-1]) + "\n"
    with pytest.raises(DesignError) as info:
        parse_design(text)
    assert info.value.reason == "invalid"
    missing = [p for p, c in pair_counts(Design(7, 3, fano.blocks[:-1])).items() if c == 0]
    a, b = missing[0]
    assert f"{{{a + 1}, {b + 1}}}" in str(info.value) or f"({a + 1}, {b + 1})" in str(info.value)


@pytest.mark.parametrize("text", ["design 7 3\n", "blocks 7 3 7\n", "design 3 3 1\n1 2\n", "design 3 3 1\n1 2 9\n"])
def test_parse_malformed(text):
    with pytest.raises((ParseError, DesignError)):
        parse_design(text)


def test_make_design_sorts_and_json():
    d = make_design(3, 3, [[2, 0, 1]])
    assert d.blocks == ((0, 1, 2),)
    assert design_to_json(d) == {"n": 3, "t": 3, "blocks": [[1, 2, 3]]}
