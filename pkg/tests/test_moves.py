import pytest

from hamflow.diagram import DISK, SPHERE, validate_diagram
from hamflow.enumerate import AtlasRequest, enumerate_atlas
from hamflow.homotopy import core, homology, isomorphic, order_complex
from hamflow.moves import (UnknownClass, all_moves, closure_check, connection_splits, covers,
                           whitehead_splits)
from hamflow.poset import build_poset


def test_whitehead_on_interior_two_saddle():
    a = enumerate_atlas(AtlasRequest(1, 3, SPHERE))
    (top,) = a.stratum(2)
    moves = whitehead_splits(top.diagram)
    assert moves
    for mk, d in moves:
        assert mk.name == "whitehead-interior"
        assert validate_diagram(d).ok
        assert d.codim() == 1
        assert d.census()["saddles"] == [{"placement": "interior", "two_k": 2, "count": 2}]
        assert len(d.connections()) == 1


def test_heteroclinic_pair_splits_into_figure_eights():
    a = enumerate_atlas(AtlasRequest(1, 3, SPHERE))
    (mid,) = a.stratum(1)
    moves = connection_splits(mid.diagram)
    assert moves
    for _, d in moves:
        assert d.codim() == 0
        assert len(d.connections()) == 2


def test_every_move_drops_codim_by_one(disk12):
    for c in disk12.classes:
        for _, d in all_moves(c.diagram):
            assert validate_diagram(d).ok
            assert d.codim() == c.codim - 1


def test_generic_classes_have_no_moves(disk12):
    for c in disk12.stratum(0):
        assert covers(c, disk12) == set()


def test_degenerate_classes_have_moves(disk12):
    for c in disk12.classes:
        if c.codim:
            assert covers(c, disk12)


@pytest.mark.parametrize("centers,surface", [((1, 2), DISK), ((2, 1), DISK), ((1, 3), DISK),
                                             ((1, 3), SPHERE), ((2, 2), SPHERE)])
def test_closure(centers, surface):
    a = enumerate_atlas(AtlasRequest(*centers, surface))
    rep = closure_check(a)
    assert rep.ok, (rep.escapees[:3], rep.bad_codim[:3])


def test_unknown_class(disk12, disk21):
    with pytest.raises(UnknownClass):
        covers(disk21.classes[0], disk12)


def test_single_detach_gives_same_invariants(disk12):
    multi = build_poset(disk12, multi_detach=True)
    single = build_poset(disk12, multi_detach=False)
    assert len(single.covers) <= len(multi.covers)
    assert isomorphic(core(single), core(multi))
    assert homology(order_complex(single)).trimmed() == homology(order_complex(multi)).trimmed()
