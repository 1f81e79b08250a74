"""Fixtures with known answers and the property checks run by ``hamflow selftest``."""
from __future__ import annotations

import itertools
import random

from .diagram import DISK, SPHERE, validate_diagram
from .homotopy import (SimplicialComplex, core, homology, order_complex, rational_betti,
                       removal_sequence)
from .poset import FinitePoset

# -- finite spaces


def pseudocircle() -> FinitePoset:
    """Two minima below two maxima: a finite model of the circle."""
    return FinitePoset.from_relations("abcd", [(x, y) for x in "ab" for y in "cd"])


def cone(p: FinitePoset, apex="*") -> FinitePoset:
    pairs = [(x, y) for y in p.elements for x in p.below[y]]
    return FinitePoset.from_relations(tuple(p.elements) + (apex,),
                                      pairs + [(x, apex) for x in p.elements])


def suspension(p: FinitePoset, n="N", s="S") -> FinitePoset:
    pairs = [(x, y) for y in p.elements for x in p.below[y]]
    pairs += [(x, t) for x in p.elements for t in (n, s)]
    return FinitePoset.from_relations(tuple(p.elements) + (n, s), pairs)


def minimal_sphere(n: int) -> FinitePoset:
    """Iterated suspension of two points: 2n+2 points, weak type S^n."""
    p = FinitePoset.from_relations(("a0", "b0"), [])
    for k in range(1, n + 1):
        p = suspension(p, f"a{k}", f"b{k}")
    return p


def random_poset(rng: random.Random, n: int, density: float = 0.35) -> FinitePoset:
    els = list(range(n))
    pairs = [(i, j) for i in els for j in els if i < j and rng.random() < density]
    return FinitePoset.from_relations(els, pairs)


# -- simplicial complexes

RP2_FACETS = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
              (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]


def rp2() -> SimplicialComplex:
    """Six-vertex projective plane."""
    return SimplicialComplex.from_facets(RP2_FACETS)


def sphere_boundary(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex."""
    return SimplicialComplex.from_facets(itertools.combinations(range(n + 2), n + 1))


def grid_surface(twist: bool) -> SimplicialComplex:
    """3x3 grid with opposite sides glued: the torus, or the Klein bottle when twisted."""
    def v(i, j):
        if j == 3:
            i, j = (-i if twist else i), 0
        return 3 * (i % 3) + j

    facets = []
    for i in range(3):
        for j in range(3):
            facets += [(v(i, j), v(i + 1, j), v(i + 1, j + 1)), (v(i, j), v(i, j + 1), v(i + 1, j + 1))]
    return SimplicialComplex.from_facets(facets)


def random_complex(rng: random.Random, n_vertices: int, n_facets: int, max_dim: int = 3):
    facets = []
    for _ in range(n_facets):
        k = rng.randint(1, min(max_dim, n_vertices - 1) + 1)
        facets.append(tuple(rng.sample(range(n_vertices), k)))
    return SimplicialComplex.from_facets(facets)


def complex_fixtures(rng: random.Random, n_random: int = 20) -> list:
    fx = [("S1", sphere_boundary(1)), ("S2", sphere_boundary(2)), ("S3", sphere_boundary(3)),
          ("RP2", rp2()), ("torus", grid_surface(False)), ("klein", grid_surface(True)),
          ("pseudocircle", order_complex(pseudocircle())),
          ("minimal S2", order_complex(minimal_sphere(2)))]
    for j in range(n_random):
        nv = rng.randint(3, 12)
        fx.append((f"random{j}", random_complex(rng, nv, rng.randint(2, 10))))
    return fx


# -- property checks, each returning (ok, detail)


def check_pseudocircle():
    h = homology(order_complex(pseudocircle()))
    return h.betti == (1, 1), f"b={h.betti}"


def check_cones(rng, n=30):
    for _ in range(n):
        p = cone(random_poset(rng, rng.randint(1, 8)))
        if len(core(p)) != 1:
            return False, f"cone on {len(p) - 1} points has core {len(core(p))}"
        h = homology(order_complex(p), reduced=True)
        if any(h.betti) or any(h.torsion):
            return False, f"cone has reduced homology {h.betti}"
    return True, ""


def check_rp2():
    h = homology(rp2())
    return h.betti == (1, 0, 0) and h.torsion[1] == (2,), f"b={h.betti} torsion={h.torsion}"


def check_snf_vs_rank(rng, n_random=20):
    for name, k in complex_fixtures(rng, n_random):
        if len(k.vertices) > 12:
            continue
        a, b = homology(k, "q").betti, rational_betti(k)
        if a != b:
            return False, f"{name}: snf {a} rational {b}"
    return True, ""


def check_beat_invariance(rng, n=200, max_size=10):
    for _ in range(n):
        p = random_poset(rng, rng.randint(1, max_size), rng.choice((0.2, 0.35, 0.5)))
        h = homology(order_complex(p)).trimmed()
        c, _ = removal_sequence(p, rng)
        hc = homology(order_complex(c)).trimmed()
        if hc != h:
            return False, f"{len(p)} points: {h.betti} vs core {hc.betti}"
    return True, ""


def check_relabel(atlas, rng, per_class=20):
    for c in atlas.classes:
        d = c.diagram
        for _ in range(per_class):
            p = list(range(d.n_darts))
            q = list(range(len(d.kinds)))
            rng.shuffle(p)
            rng.shuffle(q)
            if d.relabel(p, q).canonical_code != d.canonical_code:
                return False, f"class {c.id[:12]} changed under relabelling"
    return True, ""


def check_index_sum(atlas):
    chi = atlas.request.surface.chi
    for c in atlas.classes:
        if c.diagram.index_sum() != chi or not validate_diagram(c.diagram).ok:
            return False, f"class {c.id[:12]}"
    return True, ""


def check_cover_codim(p: FinitePoset):
    for lo, up in p.covers:
        if p.codim[lo] != p.codim[up] + 1:
            return False, f"{str(lo)[:12]} (codim {p.codim[lo]}) < {str(up)[:12]} (codim {p.codim[up]})"
    return True, ""


def faulty_poset() -> FinitePoset:
    """A cover that skips a codimension."""
    return FinitePoset.from_relations("xyz", [("x", "y"), ("y", "z")], {"x": 2, "y": 0, "z": -1})


def suite(rng: random.Random, inject_fault=None):
    """(name, thunk) pairs in a fixed order; the seed only drives random fixtures."""
    from .enumerate import AtlasRequest, enumerate_atlas
    from .poset import build_poset

    cache = {}

    def atlas():
        if "a" not in cache:
            cache["a"] = enumerate_atlas(AtlasRequest(1, 2, DISK))
        return cache["a"]

    def covers():
        if inject_fault == "cover-codim":
            return check_cover_codim(faulty_poset())
        return check_cover_codim(build_poset(atlas()))

    return [
        ("pseudocircle", check_pseudocircle),
        ("cones", lambda: check_cones(rng)),
        ("rp2-torsion", check_rp2),
        ("snf-vs-rational", lambda: check_snf_vs_rank(rng)),
        ("beat-point-invariance", lambda: check_beat_invariance(rng, 50)),
        ("index-sum", lambda: check_index_sum(atlas())),
        ("sphere-index-sum", lambda: check_index_sum(enumerate_atlas(AtlasRequest(1, 2, SPHERE)))),
        ("canonical-relabel", lambda: check_relabel(atlas(), rng)),
        ("cover-codim-decrement", covers),
    ]
