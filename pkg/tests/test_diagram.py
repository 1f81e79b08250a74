import dataclasses
import random
from fractions import Fraction

import pytest

from hamflow.diagram import (DISK, SPHERE, CenterSlot, DirectionInconsistent, FlowDiagram,
                             SaddleKind, Surface, boundary, canonical_code, classify,
                             codim_saddle, index, interior, make, validate_diagram)


def figure_eight(cw_outer=True):
    # one 1-saddle with two loops: two ccw centers inside, one cw center outside
    return make(SPHERE, {0: interior(1)}, {d: 0 for d in range(4)},
                {0: 1, 1: 2, 2: 3, 3: 0}, {0: 1, 1: 0, 2: 3, 3: 2},
                {0: True, 1: False, 2: True, 3: False},
                contents=[(0, CenterSlot(False)), (2, CenterSlot(False)), (1, CenterSlot(cw_outer))])


def test_saddle_kinds():
    assert index(interior(1)) == -1
    assert index(boundary(1)) == Fraction(-1, 2)
    assert index(boundary(4)) == -2
    assert index("center") == 1
    assert interior(2).degree == 6
    assert boundary(3).degree == 5
    assert codim_saddle(interior(1)) == 0
    assert codim_saddle(interior(2)) == 2
    assert codim_saddle(boundary(1)) == 0
    assert codim_saddle(boundary(4)) == 3
    assert boundary(0).is_fake and not boundary(1).is_fake


def test_surfaces():
    assert SPHERE.chi == 2 and DISK.chi == 1
    assert Surface(0, 2).chi == 0


def test_figure_eight_valid():
    d = figure_eight()
    assert validate_diagram(d).ok
    assert d.centers == (1, 2)
    assert d.index_sum() == 2
    assert d.codim() == 0
    assert len(d.faces) == 3
    assert d.census()["saddles"] == [{"placement": "interior", "two_k": 2, "count": 1}]
    assert d.census()["boundary"] is None


def test_wrong_center_orientation():
    r = validate_diagram(figure_eight(cw_outer=False))
    assert [c.name for c in r.failures] == ["face-content"]


def test_direction_flip_is_rejected():
    d = figure_eight()
    bad = dataclasses.replace(d, out=(not d.out[0],) + d.out[1:])
    r = validate_diagram(bad)
    assert "direction" in [c.name for c in r.failures]
    with pytest.raises(DirectionInconsistent):
        r.raise_for_errors()


def test_fake_saddle_is_rejected():
    d = figure_eight()
    bad = dataclasses.replace(d, kinds=(SaddleKind("boundary", 0),))
    assert validate_diagram(bad).failures[0].name == "no-fake-saddle"


def test_index_mismatch_on_wrong_surface():
    d = dataclasses.replace(figure_eight(), surface=DISK)
    names = [c.name for c in validate_diagram(d).failures]
    assert "index-sum" in names


def test_permutations_are_checked():
    with pytest.raises(ValueError):
        FlowDiagram(SPHERE, (interior(1),), (0, 0, 0, 0), (1, 2, 3, 0), (0, 1, 2, 3),
                    (True, False, True, False))


def test_heteroclinic_pair_with_periodic_boundary(disk12):
    # two 1-saddles joined by heteroclinic separatrices, boundary periodic
    hits = [c for c in disk12.stratum(1)
            if c.census["boundary"] == "periodic"
            and c.census["saddles"] == [{"placement": "interior", "two_k": 2, "count": 2}]]
    assert hits
    for c in hits:
        conns = c.diagram.connections()
        assert len(conns) == 1 and conns[0].codim == 1


def test_index_sum_all(disk12, disk13, sphere_atlases):
    for atlas in [disk12, disk13, *sphere_atlases.values()]:
        chi = atlas.request.surface.chi
        for c in atlas.classes:
            assert c.diagram.index_sum() == chi
            assert validate_diagram(c.diagram).ok


def test_json_round_trip(disk12):
    for c in disk12.classes:
        d = FlowDiagram.from_json(c.diagram.to_json())
        assert d == c.diagram
        assert d.canonical_code == c.code


def test_relabel_invariance(disk13):
    rng = random.Random(3)
    for c in disk13.classes:
        d = c.diagram
        for _ in range(30):
            p = list(range(d.n_darts))
            rng.shuffle(p)
            q = list(range(len(d.kinds)))
            rng.shuffle(q)
            assert d.relabel(p, q).canonical_code == c.code


def test_codes_separate_classes(disk12):
    assert len({c.code for c in disk12.classes}) == len(disk12.classes)


def test_mirror(disk12, disk21):
    codes21 = {c.code for c in disk21.classes}
    for c in disk12.classes:
        m = c.diagram.mirror()
        assert validate_diagram(m).ok
        assert m.centers == (c.centers[1], c.centers[0])
        assert m.canonical_code in codes21
        assert m.mirror().canonical_code == c.code


def test_merge_mirrors_code():
    d = figure_eight()
    assert canonical_code(d, True) == min(d.canonical_code, d.mirror().canonical_code)
    assert classify(d, True).id == canonical_code(d, True).hex()
