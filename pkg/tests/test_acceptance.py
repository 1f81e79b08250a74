"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (``pytest tests/test_acceptance.py -s``) or directly with
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import io
import random
import time
from contextlib import redirect_stdout
from functools import lru_cache

import pytest

from hamflow.cli import main
from hamflow.diagram import DISK, SPHERE, validate_diagram
from hamflow.enumerate import AtlasRequest, enumerate_atlas
from hamflow.homotopy import (core, homology, isomorphic, order_complex, rational_betti,
                              removal_sequence)
from hamflow.moves import closure_check
from hamflow import oracles
from hamflow.poset import build_poset


@lru_cache(None)
def atlas12():
    return enumerate_atlas(AtlasRequest(1, 2, DISK))


@lru_cache(None)
def component12():
    (comp,) = build_poset(atlas12()).connected_components()
    return comp


def criterion_1():
    t = time.perf_counter()
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = main(["enumerate", "--centers", "1,2", "--surface", "disk"])
    dt = time.perf_counter() - t
    lines = buf.getvalue().splitlines()
    ok = rc == 0 and lines[:2] == ["codim 0:8 1:12 2:9 3:2", "total 31"] and dt < 60
    return ok, f"{' / '.join(lines)} in {dt:.2f}s"


def criterion_2():
    top = atlas12().stratum(3)
    want = [{"placement": "boundary", "two_k": 4, "count": 1}]
    ok = len(top) == 2 and all(c.census["saddles"] == want for c in top)
    return ok, f"{len(top)} codim-3 classes, saddles {[c.census['saddles'] for c in top]}"


def criterion_3():
    p = build_poset(atlas12())
    gaps = [(lo, up) for lo, up in p.covers if p.codim[lo] - p.codim[up] != 1]
    rep = closure_check(atlas12())
    ok = not gaps and not rep.escapees and rep.ok
    return ok, f"{len(p.covers)} Hasse edges, {len(gaps)} with codim gap != 1, {len(rep.escapees)} escapees"


def criterion_4():
    comp = component12()
    c0 = core(comp)
    rng = random.Random(0)
    same = all(isomorphic(core(comp, random.Random(rng.random())), c0) for _ in range(50))
    ok = len(c0) == 9 and same
    return ok, f"core has {len(c0)} elements (expected 9); 50 random removal orders isomorphic: {same}"


def criterion_5():
    t = time.perf_counter()
    comp = component12()
    hc = homology(order_complex(core(comp))).trimmed()
    hf = homology(order_complex(comp)).trimmed()
    dt = time.perf_counter() - t
    ok = all(h.betti == (1, 0, 0, 1) and not any(h.torsion) for h in (hc, hf)) and dt < 10
    return ok, f"core b={hc.betti} full b={hf.betti} torsion {hc.torsion}/{hf.torsion} in {dt:.2f}s"


def criterion_6():
    out = []
    ok = True
    for centers in ("1,1", "1,2", "1,3"):
        buf = io.StringIO()
        with redirect_stdout(buf):
            rc = main(["analyze", "--centers", centers, "--surface", "sphere"])
        a = enumerate_atlas(AtlasRequest(*map(int, centers.split(",")), SPHERE))
        p = build_poset(a)
        comps = p.connected_components()
        top = max(c.codim for c in a.classes)
        mins = [c.id for c in a.classes if c.codim == top]
        good = (rc == 0 and "contractible no" not in buf.getvalue() and len(comps) == 1
                and len(mins) == 1 and mins[0] in comps[0].elements)
        ok &= good
        out.append(f"({centers}) {'contractible' if good else 'FAILED'}")
    return ok, ", ".join(out)


def criterion_7():
    rng = random.Random(7)
    parts = {}
    atlases = [atlas12(), enumerate_atlas(AtlasRequest(2, 1, DISK)),
               enumerate_atlas(AtlasRequest(1, 3, DISK))]
    atlases += [enumerate_atlas(AtlasRequest(*c, SPHERE)) for c in ((1, 1), (1, 2), (1, 3), (2, 2))]
    parts["index-sum"] = all(c.diagram.index_sum() == a.request.surface.chi
                             and validate_diagram(c.diagram).ok
                             for a in atlases for c in a.classes)
    parts["relabel x1000"] = oracles.check_relabel(atlas12(), rng, 1000)[0]
    parts["beat-removal x200"] = oracles.check_beat_invariance(rng, 200, 10)[0]
    fx = [k for _, k in oracles.complex_fixtures(rng, 40) if len(k.vertices) <= 12]
    parts["snf=rational"] = all(homology(k, "q").betti == rational_betti(k) for k in fx)
    parts["pseudocircle"] = homology(order_complex(oracles.pseudocircle())).betti == (1, 1)
    parts["rp2 torsion 2"] = homology(oracles.rp2()).torsion[1] == (2,)
    return all(parts.values()), ", ".join(f"{k}:{'ok' if v else 'FAIL'}" for k, v in parts.items())


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7]


def line(n, ok, detail):
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n, acceptance_log):
    ok, detail = CRITERIA[n - 1]()
    acceptance_log.append(line(n, ok, detail))
    print(acceptance_log[-1])
    assert ok, detail


def test_core_profile():
    # 21 of 31 points go; three generic, three codim-1, two codim-2
    # classes and both codim-3 classes survive
    comp = component12()
    c, removed = removal_sequence(comp)
    profile = sorted(comp.codim[x] for x in c.elements)
    assert len(removed) == 21
    assert profile == [0, 0, 0, 1, 1, 1, 2, 2, 3, 3]


if __name__ == "__main__":
    for n, fn in enumerate(CRITERIA, 1):
        print(line(n, *fn()), flush=True)
