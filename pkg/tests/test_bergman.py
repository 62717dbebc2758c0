from __future__ import annotations

import random

import pytest

from invsys.bergman import (CosetElement, FreeAbElement, bergman_demo,
                            coset_equal, d_map, f, g, gset_bond,
                            h_relators, h_subgroup_member,
                            random_h_combination, translate,
                            triangle_relator)
from invsys.errors import LevelMismatch, SupportExceedsBound


def test_free_elements_are_an_abelian_group():
    a = FreeAbElement.of({g(1, 2): 2, g(2, 3): -1})
    b = FreeAbElement.gen(g(1, 2))
    assert a.add(b).as_dict() == {g(1, 2): 3, g(2, 3): -1}
    assert a.sub(a).is_zero()
    assert a.scale(0).is_zero()
    assert a.scale(-2).as_dict() == {g(1, 2): -4, g(2, 3): 2}
    assert a.coefficient_sum() == 1


def test_triangle_relator_membership():
    r = triangle_relator(1, 2, 3)
    assert h_subgroup_member(r, 1, 4)
    # a relator using index 1 is not in the level-2 subgroup
    assert not h_subgroup_member(r, 2, 4)
    assert h_subgroup_member(triangle_relator(2, 3, 4), 2, 4)
    # a bare generator is never a relator combination
    assert not h_subgroup_member(FreeAbElement.gen(g(1, 2)), 1, 4)


def test_membership_rejects_out_of_range_support():
    with pytest.raises(SupportExceedsBound):
        h_subgroup_member(FreeAbElement.gen(g(1, 9)), 1, 4)


def test_d_map_kills_relators():
    rng = random.Random(40)
    for _ in range(200):
        n = rng.randint(3, 6)
        alpha = rng.randint(1, n - 2)
        e = random_h_combination(rng, alpha, n)
        assert d_map(e).is_zero()


def test_d_map_outputs_sum_to_zero():
    rng = random.Random(41)
    for _ in range(100):
        coeffs = {g(rng.randint(1, 4), rng.randint(5, 8)): rng.randint(-5, 5)
                  for _ in range(rng.randint(1, 4))}
        out = d_map(FreeAbElement.of(coeffs))
        assert out.coefficient_sum() == 0
    assert d_map(FreeAbElement.gen(g(2, 5))).as_dict() == {f(2): 1, f(5): -1}


def test_gset_bond_functorial_up_to_cosets():
    n = 5
    rng = random.Random(42)
    for _ in range(30):
        c = translate(CosetElement.basepoint(4), random_h_combination(rng, 2, n))
        via = gset_bond(1, 2, gset_bond(2, 4, c))
        direct = gset_bond(1, 4, c)
        assert coset_equal(via, direct, n)


def test_gset_bond_surjective_with_explicit_preimage():
    # any level-1 point is hit from level 3 by untranslating g(1,3)
    n = 5
    target = translate(CosetElement.basepoint(1),
                       FreeAbElement.of({g(1, 2): 2, g(2, 4): 1}))
    pre = CosetElement(3, target.rep.sub(FreeAbElement.gen(g(1, 3))))
    assert coset_equal(gset_bond(1, 3, pre), target, n)


def test_coset_equal_needs_matching_levels():
    with pytest.raises(LevelMismatch):
        coset_equal(CosetElement.basepoint(1), CosetElement.basepoint(2), 4)
    with pytest.raises(LevelMismatch):
        gset_bond(1, 2, CosetElement.basepoint(3))


def test_translation_by_subgroup_fixes_cosets():
    rng = random.Random(43)
    n = 5
    c = CosetElement.basepoint(2)
    for _ in range(20):
        moved = translate(c, random_h_combination(rng, 2, n))
        assert coset_equal(moved, c, n)
    # translation by a non-relator moves the coset
    moved = translate(c, FreeAbElement.gen(g(2, 3)))
    assert not coset_equal(moved, c, n)


def test_relator_counts():
    assert len(h_relators(1, 3)) == 1
    assert len(h_relators(1, 4)) == 4
    assert len(h_relators(2, 4)) == 1
    assert h_relators(3, 4) == []


def test_demo_checks_all_pass():
    for n in (4, 5, 6):
        checks = bergman_demo(n, seed=0)
        assert checks
        for desc, ok in checks:
            assert ok, desc
