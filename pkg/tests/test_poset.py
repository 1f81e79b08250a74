import pytest

from hamflow.oracles import pseudocircle
from hamflow.poset import FinitePoset, hasse_dot, parse_dot


def chain(n):
    return FinitePoset.from_relations(range(n), [(i, i + 1) for i in range(n - 1)])


def test_transitive_closure():
    p = chain(4)
    assert p.leq(0, 3) and not p.leq(3, 0)
    assert p.covers == ((0, 1), (1, 2), (2, 3))
    assert p.dimension() == 3
    assert p.downset(2) == {0, 1, 2}
    assert p.upset(2) == {2, 3}


def test_cycle_rejected():
    with pytest.raises(ValueError):
        FinitePoset.from_relations("ab", [("a", "b"), ("b", "a")])


def test_components():
    p = FinitePoset.from_relations("abcde", [("a", "b"), ("c", "d")])
    sizes = sorted(len(c) for c in p.connected_components())
    assert sizes == [1, 2, 2]


def test_subposet_keeps_order():
    p = chain(4).without(1)
    assert p.covers == ((0, 2), (2, 3))


def test_json_round_trip(poset12):
    q = FinitePoset.from_json(poset12.to_json())
    assert q.elements == poset12.elements
    assert q.covers == poset12.covers
    assert q.codim == poset12.codim


def test_dot_round_trip(poset12):
    for flip in (False, True):
        text = hasse_dot(poset12, flip)
        q = parse_dot(text, flip)
        assert set(q.covers) == set(poset12.covers)
        assert q.codim == poset12.codim


def test_dot_orientation():
    p = pseudocircle()
    down = hasse_dot(p)
    up = hasse_dot(p, paper_orientation=True)
    assert "n2 -> n0;" in down and "n0 -> n2;" in up


def test_levels(disk12, poset12):
    assert len(poset12) == 31
    assert {k: sum(1 for v in poset12.codim.values() if v == k) for k in range(4)} == \
        {0: 8, 1: 12, 2: 9, 3: 2}
    for lo, up in poset12.covers:
        assert poset12.codim[lo] == poset12.codim[up] + 1
    # generic classes are maximal, the most degenerate ones minimal
    for x in poset12.elements:
        if poset12.codim[x] == 0:
            assert not poset12.above[x]
        if poset12.codim[x] == 3:
            assert not poset12.below[x]


def test_connected(poset12):
    assert len(poset12.connected_components()) == 1


def test_sphere_unique_minimum(sphere_atlases):
    from hamflow.poset import build_poset
    p = build_poset(sphere_atlases[(1, 3)])
    mins = [x for x in p.elements if not p.below[x]]
    assert len(mins) == 1 and p.codim[mins[0]] == 2
