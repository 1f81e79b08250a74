"""Exhaustive generation of diagram classes for given center counts."""
from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass, field

from .diagram import (BOUNDARY, DISK, INTERIOR, SPHERE, BoundaryHole, CenterSlot, EquivClass,
                      FlowDiagram, NestedComponent, PeriodicBoundary, SaddleKind, Surface,
                      bare_diagram, classify, make, validate_diagram)

DEFAULT_CENTER_LIMIT = 4


class LimitExceeded(ValueError):
    pass


def center_limit() -> int:
    raw = os.environ.get("HAMFLOW_CENTER_LIMIT")
    return int(raw) if raw else DEFAULT_CENTER_LIMIT


@dataclass(frozen=True)
class AtlasRequest:
    i_minus: int
    i_plus: int
    surface: Surface
    max_codim: int | None = None
    merge_mirrors: bool = False

    @property
    def i(self) -> int:
        return self.i_minus + self.i_plus

    def check(self, limit=None):
        limit = center_limit() if limit is None else limit
        if self.i_minus < 0 or self.i_plus < 0 or self.i < 1:
            raise ValueError("need at least one center")
        if self.surface not in (SPHERE, DISK):
            raise ValueError(f"only the sphere and the disk are supported, not {self.surface}")
        if self.i > limit:
            raise LimitExceeded(f"{self.i} centers exceed the limit {limit}")

    def to_json(self) -> dict:
        return {"i_minus": self.i_minus, "i_plus": self.i_plus, "surface": self.surface.name,
                "max_codim": self.max_codim, "merge_mirrors": self.merge_mirrors}


@dataclass
class Atlas:
    request: AtlasRequest
    classes: list = field(default_factory=list)  # EquivClass sorted by (codim, code)

    @property
    def by_id(self) -> dict:
        return {c.id: c for c in self.classes}

    @property
    def by_code(self) -> dict:
        return {c.code: c for c in self.classes}

    def stratum(self, k) -> list:
        return [c for c in self.classes if c.codim == k]

    def counts(self) -> dict:
        return dict(sorted(Counter(c.codim for c in self.classes).items()))

    def counts_line(self) -> str:
        return "codim " + " ".join(f"{k}:{n}" for k, n in self.counts().items())


def saddle_budgets(req: AtlasRequest) -> list:
    """Saddle multisets whose indices sum to chi - i, as sorted tuples of SaddleKind."""
    total = 2 * (req.i - req.surface.chi)  # sum of two_k
    if total < 0:
        return []
    parts = [SaddleKind(INTERIOR, t) for t in range(2, total + 1, 2)]
    if req.surface.boundaries:
        parts += [SaddleKind(BOUNDARY, t) for t in range(1, total + 1)]
    res = []

    def rec(start, left, acc):
        if left == 0:
            res.append(tuple(acc))
            return
        for j in range(start, len(parts)):
            if parts[j].two_k <= left:
                rec(j, left - parts[j].two_k, acc + [parts[j]])

    rec(0, total, [])
    return sorted(tuple(sorted(c)) for c in res)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _set_partitions(rest):
        for j in range(len(p)):
            yield p[:j] + [[first] + p[j]] + p[j + 1:]
        yield [[first]] + p


def _necklaces(kinds):
    seen = set()
    for perm in itertools.permutations(kinds):
        key = min(perm[j:] + perm[:j] for j in range(len(perm)))
        if key not in seen:
            seen.add(key)
            yield key


def _pieces(interior_kinds, boundary_kinds, surface):
    """Connected planar maps on the given saddles, boundary saddles sharing one circle."""
    found = {}
    necks = list(_necklaces(tuple(boundary_kinds))) if boundary_kinds else [()]
    phases = (False, True) if boundary_kinds else (False,)
    for neck in necks:
        for phase in phases:
            base = _skeleton(interior_kinds, neck, phase)
            if base is None:
                continue
            kinds, vertex, rot, twin, out, hole, free = base
            outs = [d for d in free if out[d]]
            ins = [d for d in free if not out[d]]
            if len(outs) != len(ins):
                continue
            for perm in itertools.permutations(ins):
                tw = dict(twin)
                for a, b in zip(outs, perm):
                    tw[a], tw[b] = b, a
                try:
                    d = make(surface, kinds, vertex, rot, tw, out, hole)
                except ValueError:
                    continue
                if len(d.components) != 1 or None in d.face_color:
                    continue
                if len({d.vertex[x] for x in range(d.n_darts)}) - d.n_darts // 2 + len(d.faces) != 2:
                    continue
                found.setdefault(d.canonical_code, d)
    return [found[k] for k in sorted(found)]


def _skeleton(interior_kinds, neck, phase):
    kinds, vertex, rot, twin, out = {}, {}, {}, {}, {}
    hole, free = set(), []
    n = 0
    v = 0
    for k in interior_kinds:
        ds = list(range(n, n + k.degree))
        for j, x in enumerate(ds):
            vertex[x] = v
            rot[x] = ds[(j + 1) % len(ds)]
            out[x] = j % 2 == 0
        free += ds
        kinds[v] = k
        n += k.degree
        v += 1
    ends = []
    cur = phase
    for k in neck:
        ds = list(range(n, n + k.degree))
        for j, x in enumerate(ds):
            vertex[x] = v
            rot[x] = ds[(j + 1) % len(ds)]
            out[x] = cur ^ (j % 2 == 1)
        free += ds[1:-1]
        hole.add(ds[-1])
        ends.append((ds[0], ds[-1]))
        cur = not out[ds[-1]]
        kinds[v] = k
        n += k.degree
        v += 1
    if neck:
        if cur != phase:
            return None  # flow along the circle must close up
        for j, (a, b) in enumerate(ends):
            a2 = ends[(j + 1) % len(ends)][0]
            twin[b], twin[a2] = a2, b
    return kinds, vertex, rot, twin, out, hole, free


def _pruefer_trees(m):
    if m == 1:
        yield []
        return
    if m == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(m), repeat=m - 2):
        degree = [1] * m
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(j for j in range(m) if degree[j] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = [j for j in range(m) if degree[j] == 1]
        edges.append((u, w))
        yield edges


def _assemble(pieces, req):
    """All ways of nesting the pieces and placing centers and the periodic boundary."""
    kinds, vertex, rot, twin, out, hole = {}, {}, {}, {}, {}, set()
    vshift = 0
    dshift = 0
    for p in pieces:
        for d in range(p.n_darts):
            vertex[d + dshift] = p.vertex[d] + vshift
            rot[d + dshift] = p.rot[d] + dshift
            twin[d + dshift] = p.twin[d] + dshift
            out[d + dshift] = p.out[d]
        for j, k in enumerate(p.kinds):
            kinds[j + vshift] = k
        hole |= {b + dshift for b in p.hole}
        dshift += p.n_darts
        vshift += len(p.kinds)
    skel = make(req.surface, kinds, vertex, rot, twin, out, hole)
    comp_faces = [[] for _ in skel.components]
    hole_face = None
    for f, ds in enumerate(skel.faces):
        if skel.face_color[f] == 0:
            hole_face = f
        else:
            comp_faces[skel.component_of[ds[0]]].append(f)
    need_periodic = bool(req.surface.boundaries) and hole_face is None
    m = len(comp_faces)
    for edges in _pruefer_trees(m):
        for links in _choose_links(edges, comp_faces, skel, set()):
            used = {f for pair in links for f in pair}
            free = [f for fs in comp_faces for f in fs if f not in used]
            options = free if need_periodic else [None]
            for pf in options:
                rest = [f for f in free if f != pf]
                plus = sum(skel.face_color[f] == 1 for f in rest)
                if plus != req.i_minus or len(rest) - plus != req.i_plus:
                    continue
                contents = []
                for a, b in links:
                    contents.append((skel.faces[a][0], NestedComponent(skel.faces[b][0])))
                    contents.append((skel.faces[b][0], NestedComponent(skel.faces[a][0])))
                for f in rest:
                    contents.append((skel.faces[f][0], CenterSlot(skel.face_color[f] == 1)))
                if pf is not None:
                    contents.append((skel.faces[pf][0], PeriodicBoundary()))
                if hole_face is not None:
                    contents.append((skel.faces[hole_face][0], BoundaryHole()))
                yield make(req.surface, dict(enumerate(skel.kinds)), dict(enumerate(skel.vertex)),
                           dict(enumerate(skel.rot)), dict(enumerate(skel.twin)),
                           dict(enumerate(skel.out)), set(skel.hole), contents)


def _choose_links(edges, comp_faces, skel, used):
    if not edges:
        yield []
        return
    (a, b), rest = edges[0], edges[1:]
    for fa in comp_faces[a]:
        if fa in used:
            continue
        for fb in comp_faces[b]:
            if fb in used or skel.face_color[fa] != -skel.face_color[fb]:
                continue
            for tail in _choose_links(rest, comp_faces, skel, used | {fa, fb}):
                yield [(fa, fb)] + tail


def _bare(req):
    if req.surface.boundaries == 0:
        if req.i_minus == 1 and req.i_plus == 1:
            yield bare_diagram(req.surface, CenterSlot(True), CenterSlot(False))
    elif req.i == 1:
        yield bare_diagram(req.surface, CenterSlot(req.i_minus == 1), PeriodicBoundary())


def generate(req: AtlasRequest, census):
    """Every valid diagram realising one saddle census (with repetitions)."""
    if not census:
        yield from _bare(req)
        return
    inner = [k for k in census if k.placement == INTERIOR]
    bnd = [k for k in census if k.placement == BOUNDARY]
    if sum(k.two_k % 2 for k in bnd) % 2:
        return  # sources and sinks alternate along the circle
    cache = {}

    def pieces(ik, bk):
        key = (tuple(sorted(ik)), tuple(sorted(bk)))
        if key not in cache:
            cache[key] = _pieces(list(key[0]), list(key[1]), req.surface)
        return cache[key]

    seen = set()
    for part in _set_partitions(list(range(len(inner)))):
        blocks = [[inner[j] for j in b] for b in part]
        attach = range(len(blocks) + 1) if bnd else [None]
        for a in attach:
            groups = []
            for j, b in enumerate(blocks):
                if j != a:
                    groups.append((tuple(sorted(b)), ()))
            if bnd:
                groups.append((tuple(sorted(blocks[a])) if a is not None and a < len(blocks) else (),
                               tuple(sorted(bnd))))
            sig = tuple(sorted(groups))
            if sig in seen:
                continue
            seen.add(sig)
            options = [pieces(ik, bk) for ik, bk in sig]
            for combo in itertools.product(*options):
                yield from _assemble(list(combo), req)


def enumerate_atlas(req: AtlasRequest, limit=None) -> Atlas:
    req.check(limit)
    found = {}
    for census in saddle_budgets(req):
        for d in generate(req, census):
            if req.max_codim is not None and d.codim() > req.max_codim:
                continue
            rep = validate_diagram(d)
            if not rep.ok:
                continue
            ec = classify(d, req.merge_mirrors)
            found.setdefault(ec.code, ec)
    classes = sorted(found.values(), key=lambda c: (c.codim, c.code))
    return Atlas(req, classes)


def atlas_to_json(atlas: Atlas) -> dict:
    return {
        "request": atlas.request.to_json(),
        "classes": [{"id": c.id, "codim": c.codim, "census": c.census,
                     "diagram": c.diagram.to_json()} for c in atlas.classes],
    }


def atlas_from_json(obj) -> Atlas:
    """Rebuild an atlas; every stored id is re-derived from its diagram."""
    r = obj["request"]
    surface = {"sphere": SPHERE, "disk": DISK}[r["surface"]]
    req = AtlasRequest(int(r["i_minus"]), int(r["i_plus"]), surface, r.get("max_codim"),
                       bool(r.get("merge_mirrors", False)))
    classes = []
    for c in obj["classes"]:
        d = FlowDiagram.from_json(c["diagram"])
        ec = classify(d, req.merge_mirrors)
        if ec.id != c["id"]:
            raise ValueError(f"class {c['id'][:16]}... does not match its diagram")
        if ec.codim != c["codim"]:
            raise ValueError(f"class {c['id'][:16]}... has codim {ec.codim}, file says {c['codim']}")
        classes.append(ec)
    classes.sort(key=lambda c: (c.codim, c.code))
    return Atlas(req, classes)
