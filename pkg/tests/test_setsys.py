from __future__ import annotations

import random

import pytest

from invsys.errors import (BudgetExceeded, EmptyFiber, FunctorialityViolation,
                           MissingBond, NoMaximum, NotCommuting, NotFunction,
                           NotSurjective, SigmaNotInjective)
from invsys.generators import (random_forest_poset, random_poset,
                               random_set_system,
                               random_surjective_set_system, random_tower)
from invsys.poset import chain_poset, validate_poset, wedge_poset
from invsys.setsys import (SetSystem, Thread, fiber_subsystem, is_surjective,
                           is_thread, limit_threads, ml_report,
                           thread_from_top, universal_images, validate_system,
                           validate_tower)

from conftest import brute_force_threads


def diamond():
    return validate_poset(["bot", "l", "r", "top"],
                          [("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")])


def test_validate_system_missing_bond():
    p = chain_poset(2)
    with pytest.raises(MissingBond):
        validate_system(p, {"1": (0,), "2": (0,)}, {})


def test_validate_system_not_function():
    p = chain_poset(2)
    with pytest.raises(NotFunction):
        validate_system(p, {"1": (0,), "2": (0, 1)},
                        {("1", "2"): {0: 0}})  # 1 has no image
    with pytest.raises(NotFunction):
        validate_system(p, {"1": (0,), "2": (0,)},
                        {("1", "2"): {0: 7}})  # 7 not in carrier(1)


def test_validate_system_functoriality():
    # two routes through the diamond that disagree on the top carrier
    p = diamond()
    carriers = {e: (0, 1) for e in p.elements}
    bonds = {("bot", "l"): {0: 0, 1: 1},
             ("bot", "r"): {0: 1, 1: 0},
             ("l", "top"): {0: 0, 1: 1},
             ("r", "top"): {0: 0, 1: 1}}
    with pytest.raises(FunctorialityViolation):
        validate_system(p, carriers, bonds)


def test_limit_matches_brute_force_on_random_systems():
    rng = random.Random(20)
    for _ in range(60):
        p = random_forest_poset(rng, max_elements=5)
        s = random_set_system(rng, p, max_carrier=4)
        got = sorted(t.assignment for t in limit_threads(s))
        want = sorted(t.assignment for t in brute_force_threads(s))
        assert got == want


def test_limit_budget():
    p = chain_poset(2)
    s = validate_system(p, {"1": tuple(range(4)), "2": tuple(range(4))},
                        {("1", "2"): {x: x for x in range(4)}})
    with pytest.raises(BudgetExceeded):
        limit_threads(s, budget=2)


def test_constant_system_threads():
    p = wedge_poset()
    s = validate_system(p, {e: (0, 1) for e in p.elements},
                        {("c", "a"): {0: 0, 1: 1}, ("c", "b"): {0: 0, 1: 1}})
    assert len(limit_threads(s)) == 2


def test_thread_from_top_needs_maximum():
    p = wedge_poset()
    s = validate_system(p, {e: (0,) for e in p.elements},
                        {("c", "a"): {0: 0}, ("c", "b"): {0: 0}})
    with pytest.raises(NoMaximum):
        thread_from_top(s)


def test_surjective_systems_have_threads():
    rng = random.Random(21)
    for _ in range(40):
        p = random_poset(rng, max_elements=5, ensure_maximum=True)
        s = random_surjective_set_system(rng, p)
        ok, pair = is_surjective(s)
        assert ok, pair
        threads = limit_threads(s)
        assert threads
        t = thread_from_top(s)
        assert is_thread(s, t)
        assert t in threads


def test_is_surjective_reports_first_failure():
    p = chain_poset(2)
    s = validate_system(p, {"1": (0, 1), "2": (0,)},
                        {("1", "2"): {0: 0}})
    ok, pair = is_surjective(s)
    assert not ok and pair == ("1", "2")


# -- towers ----------------------------------------------------------------


def clipdec_tower(horizon: int, width: int):
    return validate_tower(horizon, [tuple(range(width))] * (horizon + 1),
                          [{x: max(x - 1, 0) for x in range(width)}] * horizon)


def test_tower_composite_bond():
    t = clipdec_tower(6, 4)
    assert t.bond(2, 5) == {0: 0, 1: 0, 2: 0, 3: 0}
    assert t.bond(4, 5) == {0: 0, 1: 0, 2: 1, 3: 2}
    assert t.bond(3, 3) == {x: x for x in range(4)}


def test_ml_clipdec_stabilizes_at_offset_width_minus_one():
    # images at level n shrink until m = n + width - 1 and stay {0} after
    t = clipdec_tower(10, 5)
    rep = ml_report(t)
    assert rep.entries[0].stabilized_at == 4
    assert rep.entries[0].verdict == "stable"
    assert rep.entries[2].stabilized_at == 6
    assert rep.stable_everywhere() is False  # top levels cannot stabilize
    assert rep.entries[8].verdict == "unstable_at_horizon"
    assert rep.entries[8].horizon_sensitive


def test_ml_constant_tower_stable_everywhere():
    t = validate_tower(6, [(0, 1)] * 7, [{0: 0, 1: 1}] * 6)
    rep = ml_report(t)
    assert rep.stable_everywhere()
    for e in rep.entries:
        assert e.stabilized_at == e.index


def test_ml_strictly_shrinking_tower_is_horizon_sensitive():
    # carriers {0..H-n} with inclusion as the bond: every image chain keeps
    # shrinking all the way to the horizon, so no interior level stabilizes
    h = 8
    carriers = [tuple(range(h - n + 1)) for n in range(h + 1)]
    steps = [{x: x for x in carriers[n + 1]} for n in range(h)]
    t = validate_tower(h, carriers, steps)
    rep = ml_report(t)
    for e in rep.entries:
        assert e.stabilized_at == h
        if e.index < h:
            assert e.verdict == "unstable_at_horizon"
            assert e.horizon_sensitive


def test_universal_images_clipdec():
    t = clipdec_tower(10, 5)
    r, meta = universal_images(t)
    # far enough below the horizon the intersection collapses to {0};
    # the last width-1 levels see too few images to collapse
    for n in range(7):
        assert r.carriers[n] == (0,)
    assert r.carriers[10] == (0, 1, 2, 3, 4)
    assert all(meta.values())


def test_universal_images_poset_case():
    p = chain_poset(3)
    s = validate_system(p, {"1": (0, 1), "2": (0, 1), "3": (0,)},
                        {("1", "2"): {0: 0, 1: 1}, ("2", "3"): {0: 0}})
    r, meta = universal_images(s)
    assert r.carriers["1"] == (0,)
    assert r.carriers["2"] == (0,)
    assert r.carriers["3"] == (0,)
    assert all(meta.values())


def test_ml_stable_implies_surjective_universal_images():
    rng = random.Random(22)
    seen = 0
    while seen < 30:
        t = random_tower(rng)
        if not ml_report(t).stable_everywhere():
            continue
        _, meta = universal_images(t)
        assert all(meta.values())
        seen += 1


def test_thread_from_top_tower():
    t = validate_tower(5, [tuple(range(3))] * 6,
                       [{x: (x + 1) % 3 for x in range(3)}] * 5)
    th = thread_from_top(t)
    m = th.as_dict()
    for n in range(5):
        assert t.step(n)[m[str(n + 1)]] == m[str(n)]


def test_thread_from_top_tower_needs_surjective():
    t = validate_tower(2, [(0,), (0, 1), (0, 1)],
                       [{0: 0, 1: 0}, {0: 0, 1: 0}])
    with pytest.raises(NotSurjective):
        thread_from_top(t)


# -- fibers ----------------------------------------------------------------


def test_fiber_subsystem_happy_path():
    p = chain_poset(2)
    e_sys = validate_system(p, {"1": ("a0", "a1"), "2": ("b0", "b1")},
                            {("1", "2"): {"b0": "a0", "b1": "a1"}})
    s_sys = validate_system(p, {"1": (0,), "2": (0,)},
                            {("1", "2"): {0: 0}})
    level_maps = {"1": {"a0": 0, "a1": 0}, "2": {"b0": 0, "b1": 0}}
    s = Thread.of({"1": 0, "2": 0})
    sub = fiber_subsystem(e_sys, s_sys, level_maps, s)
    assert sub.carriers["1"] == ("a0", "a1")
    assert sub.carriers["2"] == ("b0", "b1")


def test_fiber_subsystem_detects_noncommuting_square():
    p = chain_poset(2)
    e_sys = validate_system(p, {"1": ("a0", "a1"), "2": ("b0", "b1")},
                            {("1", "2"): {"b0": "a0", "b1": "a1"}})
    s_sys = validate_system(p, {"1": (0, 1), "2": (0, 1)},
                            {("1", "2"): {0: 0, 1: 1}})
    level_maps = {"1": {"a0": 0, "a1": 1}, "2": {"b0": 1, "b1": 0}}
    with pytest.raises(NotCommuting):
        fiber_subsystem(e_sys, s_sys, level_maps, Thread.of({"1": 0, "2": 0}))


def test_fiber_subsystem_requires_injective_target_bonds():
    p = chain_poset(2)
    e_sys = validate_system(p, {"1": ("a",), "2": ("b",)},
                            {("1", "2"): {"b": "a"}})
    s_sys = validate_system(p, {"1": (0,), "2": (0, 1)},
                            {("1", "2"): {0: 0, 1: 0}})
    level_maps = {"1": {"a": 0}, "2": {"b": 0}}
    with pytest.raises(SigmaNotInjective):
        fiber_subsystem(e_sys, s_sys, level_maps, Thread.of({"1": 0, "2": 0}))


def test_fiber_subsystem_empty_fiber():
    p = chain_poset(2)
    e_sys = validate_system(p, {"1": ("a",), "2": ("b",)},
                            {("1", "2"): {"b": "a"}})
    s_sys = validate_system(p, {"1": (0, 1), "2": (0, 1)},
                            {("1", "2"): {0: 0, 1: 1}})
    level_maps = {"1": {"a": 0}, "2": {"b": 0}}
    with pytest.raises(EmptyFiber):
        fiber_subsystem(e_sys, s_sys, level_maps, Thread.of({"1": 1, "2": 1}))
