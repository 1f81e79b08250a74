import json

import pytest

from hamflow.diagram import DISK, SPHERE, boundary, interior
from hamflow.enumerate import (AtlasRequest, LimitExceeded, atlas_from_json, atlas_to_json,
                               center_limit, enumerate_atlas, saddle_budgets)


@pytest.mark.parametrize("centers,surface,counts", [
    ((1, 2), DISK, {0: 8, 1: 12, 2: 9, 3: 2}),
    ((2, 1), DISK, {0: 8, 1: 12, 2: 9, 3: 2}),
    ((1, 0), DISK, {0: 1}),
    ((0, 1), DISK, {0: 1}),
    ((1, 1), SPHERE, {0: 1}),
    ((1, 2), SPHERE, {0: 1}),
    ((1, 3), SPHERE, {0: 1, 1: 1, 2: 1}),
])
def test_counts(centers, surface, counts):
    assert enumerate_atlas(AtlasRequest(*centers, surface)).counts() == counts


def test_counts_line(disk12):
    assert disk12.counts_line() == "codim 0:8 1:12 2:9 3:2"
    assert len(disk12.classes) == 31


def test_mirror_counts(disk12, disk21):
    assert disk12.counts() == disk21.counts()
    merged = enumerate_atlas(AtlasRequest(1, 2, DISK, merge_mirrors=True))
    # (1,2) never mirrors onto itself, so merging changes nothing
    assert merged.counts() == disk12.counts()


def test_sphere_one_saddle():
    a = enumerate_atlas(AtlasRequest(1, 2, SPHERE))
    (c,) = a.classes
    assert c.census["saddles"] == [{"placement": "interior", "two_k": 2, "count": 1}]


def test_budgets():
    b = saddle_budgets(AtlasRequest(1, 1, DISK))
    assert b == [(boundary(1), boundary(1)), (boundary(2),), (interior(1),)]
    assert saddle_budgets(AtlasRequest(1, 1, SPHERE)) == [()]


def test_max_codim(disk12):
    a = enumerate_atlas(AtlasRequest(1, 2, DISK, max_codim=1))
    assert a.counts() == {0: 8, 1: 12}
    assert [c.id for c in a.classes] == [c.id for c in disk12.classes if c.codim <= 1]


def test_sorted_and_deterministic(disk12):
    again = enumerate_atlas(AtlasRequest(1, 2, DISK))
    assert [c.id for c in again.classes] == [c.id for c in disk12.classes]
    keys = [(c.codim, c.code) for c in disk12.classes]
    assert keys == sorted(keys)


def test_limit(monkeypatch):
    with pytest.raises(LimitExceeded):
        AtlasRequest(3, 2, DISK).check()
    monkeypatch.setenv("HAMFLOW_CENTER_LIMIT", "5")
    assert center_limit() == 5
    AtlasRequest(3, 2, DISK).check()


def test_bad_requests():
    with pytest.raises(ValueError):
        AtlasRequest(0, 0, DISK).check()
    with pytest.raises(ValueError):
        AtlasRequest(1, 1, DISK.__class__(0, 2)).check()


def test_atlas_json_round_trip(disk12):
    text = json.dumps(atlas_to_json(disk12), sort_keys=True)
    back = atlas_from_json(json.loads(text))
    assert json.dumps(atlas_to_json(back), sort_keys=True) == text


def test_atlas_json_rejects_tampered_id(disk12):
    obj = atlas_to_json(disk12)
    obj["classes"][0]["id"] = obj["classes"][1]["id"]
    with pytest.raises(ValueError):
        atlas_from_json(obj)


def test_codim3_census(disk12):
    for c in disk12.stratum(3):
        assert c.census["saddles"] == [{"placement": "boundary", "two_k": 4, "count": 1}]
