from __future__ import annotations

import random

import pytest

from invsys.errors import CycleDetected, UnknownElement
from invsys.generators import random_poset
from invsys.poset import (Poset, chain_poset, grid_poset, validate_poset,
                          wedge_poset)

from conftest import floyd_warshall_leq


def test_validate_rejects_cycles():
    with pytest.raises(CycleDetected):
        validate_poset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(CycleDetected):
        validate_poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])


def test_validate_rejects_unknown_labels():
    with pytest.raises(UnknownElement):
        validate_poset(["a"], [("a", "z")])


def test_leq_matches_reachability_oracle():
    rng = random.Random(0)
    for _ in range(50):
        p = random_poset(rng, max_elements=6)
        reach = floyd_warshall_leq(p.elements, p.covers)
        for a in p.elements:
            for b in p.elements:
                assert p.leq(a, b) == reach[(a, b)]
                assert p.lt(a, b) == (a != b and reach[(a, b)])


def test_directed_iff_maximum():
    # on a finite poset both sides reduce to the same element, so the
    # predicates must agree on every instance
    rng = random.Random(1)
    for _ in range(80):
        p = random_poset(rng, max_elements=6)
        assert p.is_directed() == (p.has_maximum() is not None)
        top = p.has_maximum()
        if top is not None:
            assert p.maximal_elements() == [top]
            for e in p.elements:
                assert p.leq(e, top)


def test_upper_bounds_and_strict_uppers():
    p = wedge_poset()
    assert set(p.upper_bounds("c", "c")) == {"a", "b", "c"}
    assert p.upper_bounds("a", "b") == []
    assert set(p.strict_uppers("c")) == {"a", "b"}
    assert p.strict_uppers("a") == []


def test_chain_poset_shape():
    p = chain_poset(4)
    assert p.elements == ("1", "2", "3", "4")
    assert p.has_maximum() == "4"
    assert p.longest_chain() == 4  # counted in elements
    assert p.leq("1", "4") and not p.leq("4", "1")


def test_grid_poset_shape():
    p = grid_poset(2, 3)
    assert len(p.elements) == 6
    assert p.has_maximum() == "(2_3)"
    assert p.leq("(1_1)", "(2_3)")
    assert not p.leq("(1_3)", "(2_1)")
    assert p.longest_chain() == 4


def test_wedge_poset_not_directed():
    p = wedge_poset()
    assert not p.is_directed()
    assert p.has_maximum() is None
    assert set(p.maximal_elements()) == {"a", "b"}


def test_linear_extension_is_consistent():
    rng = random.Random(2)
    for _ in range(30):
        p = random_poset(rng, max_elements=6)
        order = p.linear_extension()
        assert sorted(order) == sorted(p.elements)
        pos = {e: i for i, e in enumerate(order)}
        for a in p.elements:
            for b in p.elements:
                if p.lt(a, b):
                    assert pos[a] < pos[b]


def test_chains_enumeration():
    p = chain_poset(3)
    # strictly increasing flags with the given number of elements
    assert p.chains(1) == [("1",), ("2",), ("3",)]
    assert set(p.chains(2)) == {("1", "2"), ("1", "3"), ("2", "3")}
    assert p.chains(3) == [("1", "2", "3")]
    assert p.chains(4) == []


def test_cofinal_chain_dominates_everything():
    rng = random.Random(3)
    for _ in range(30):
        p = random_poset(rng, max_elements=6, ensure_maximum=True)
        ch = p.cofinal_chain()
        for i in range(len(ch) - 1):
            assert p.lt(ch[i], ch[i + 1])
        for e in p.elements:
            assert any(p.leq(e, c) for c in ch)
