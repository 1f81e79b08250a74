"""Codimension-one perturbations of a diagram.

Two families of rewrites are produced:

* Whitehead splits break one multi-saddle into two saddles joined by a new
  heteroclinic separatrix.  Darts are kept, so face contents stay put.
* Level splits perturb the Hamiltonian values inside one connection.  Its
  saddles (the boundary circle with its saddles counting as one unit) are
  divided into a raised group and a lowered group.  Boundary saddles of integer
  weight may leave the circle and become interior saddles (pinching).  Every
  separatrix running between the groups is re-routed along the face that lies
  on its side of the perturbation, which splits the connection in two.

Candidates that are not valid or that do not lower the codimension by exactly
one are dropped.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .diagram import (BOUNDARY, INTERIOR, BoundaryHole, CenterSlot, FlowDiagram, NestedComponent,
                      PeriodicBoundary, SaddleKind, make, validate_diagram)


class UnknownClass(KeyError):
    pass


@dataclass(frozen=True)
class MoveKind:
    name: str  # whitehead-interior, whitehead-boundary, whitehead-boundary-interior, level-split, unpinch
    site: tuple = ()
    l: int = 0  # weight of the split-off part, doubled for boundary saddles

    def to_json(self) -> dict:
        return {"move": self.name, "site": list(self.site), "l": self.l}


class _Work:
    """Mutable dictionary copy of a diagram used while rewriting."""

    def __init__(self, d: FlowDiagram):
        self.surface = d.surface
        self.kinds = dict(enumerate(d.kinds))
        self.vertex = dict(enumerate(d.vertex))
        self.rot = dict(enumerate(d.rot))
        self.twin = dict(enumerate(d.twin))
        self.out = dict(enumerate(d.out))
        self.hole = set(d.hole)
        self.contents = list(d.contents)
        self.next_dart = d.n_darts
        self.next_vertex = len(d.kinds)

    def new_dart(self):
        self.next_dart += 1
        return self.next_dart - 1

    def new_vertex(self, kind):
        v = self.next_vertex
        self.next_vertex += 1
        self.kinds[v] = kind
        return v

    def ring(self, cyc, v):
        for j, x in enumerate(cyc):
            self.rot[x] = cyc[(j + 1) % len(cyc)]
            self.vertex[x] = v

    def freeze(self) -> FlowDiagram:
        return make(self.surface, self.kinds, self.vertex, self.rot, self.twin, self.out,
                    self.hole, self.contents)


def _accept(d: FlowDiagram, new: FlowDiagram, drop=1) -> bool:
    return validate_diagram(new).ok and new.codim() == d.codim() - drop


def whitehead_splits(d: FlowDiagram) -> list:
    res = []
    for v, ds in enumerate(d.vertex_darts):
        if not ds:
            continue
        kind = d.kinds[v]
        if kind.placement == INTERIOR:
            res += _split_interior(d, v, ds)
        else:
            res += _split_boundary(d, v, ds)
    return res


def _split_interior(d, v, ds):
    res = []
    k = kind_k = d.kinds[v].two_k // 2
    n = len(ds)
    for l in range(1, kind_k):
        size1 = 2 * (k - l) + 1
        for s in range(n):
            fan1 = [ds[(s + j) % n] for j in range(size1)]
            fan2 = [ds[(s + size1 + j) % n] for j in range(n - size1)]
            w = _Work(d)
            del w.kinds[v]
            v1 = w.new_vertex(SaddleKind(INTERIOR, 2 * (k - l)))
            v2 = w.new_vertex(SaddleKind(INTERIOR, 2 * l))
            e1, e2 = w.new_dart(), w.new_dart()
            w.out[e1] = not d.out[fan1[0]]
            w.out[e2] = not w.out[e1]
            w.twin[e1], w.twin[e2] = e2, e1
            w.ring(fan1 + [e1], v1)
            w.ring(fan2 + [e2], v2)
            new = w.freeze()
            if _accept(d, new):
                res.append((MoveKind("whitehead-interior", (v, s), l), new))
    return res


def _split_boundary(d, v, ds):
    res = []
    K = d.kinds[v].two_k
    a, inner, b = ds[0], list(ds[1:-1]), ds[-1]
    for l in range(1, K):
        # boundary -> boundary: A i_1..i_{K-l} N1 | N2 i_{K-l+1}..i_K B
        w = _Work(d)
        del w.kinds[v]
        y1 = w.new_vertex(SaddleKind(BOUNDARY, K - l))
        y2 = w.new_vertex(SaddleKind(BOUNDARY, l))
        n1, n2 = w.new_dart(), w.new_dart()
        w.out[n1] = not d.out[inner[K - l - 1]]
        w.out[n2] = not w.out[n1]
        w.twin[n1], w.twin[n2] = n2, n1
        w.ring([a] + inner[:K - l] + [n1], y1)
        w.ring([n2] + inner[K - l:] + [b], y2)
        w.hole.add(n1)
        new = w.freeze()
        if _accept(d, new):
            res.append((MoveKind("whitehead-boundary", (v,), l), new))
    for l in range(2, K, 2):
        # boundary -> interior: an interior l/2-saddle takes l+1 consecutive interior darts
        for s in range(K - l):
            run = inner[s:s + l + 1]
            w = _Work(d)
            del w.kinds[v]
            y = w.new_vertex(SaddleKind(BOUNDARY, K - l))
            x = w.new_vertex(SaddleKind(INTERIOR, l))
            eb, ei = w.new_dart(), w.new_dart()
            w.out[eb] = d.out[run[0]]
            w.out[ei] = not w.out[eb]
            w.twin[eb], w.twin[ei] = ei, eb
            w.ring([a] + inner[:s] + [eb] + inner[s + l + 1:] + [b], y)
            w.ring(run + [ei], x)
            new = w.freeze()
            if _accept(d, new):
                res.append((MoveKind("whitehead-boundary-interior", (v, s), l), new))
    return res


def connection_splits(d: FlowDiagram, multi_detach: bool = True) -> list:
    """Level splits of single connections, including pinching of boundary saddles.

    With ``multi_detach`` several boundary saddles may leave the circle in one
    move; otherwise at most one does.
    """
    res = []
    for comp in d.components:
        verts = sorted({d.vertex[x] for x in comp})
        circle = [v for v in verts if d.kinds[v].placement == BOUNDARY]
        inner = [v for v in verts if d.kinds[v].placement == INTERIOR]
        detachable = [v for v in circle if d.kinds[v].two_k % 2 == 0]
        max_det = len(detachable) if multi_detach else min(1, len(detachable))
        for r in range(max_det + 1):
            for det in itertools.combinations(detachable, r):
                res += _level_splits(d, inner, circle, det)
    return res


def _level_splits(d, inner, circle, det):
    res = []
    # the colour of the face next to A decides where a detached saddle can go
    sides = {d.corner_color(d.vertex_darts[v][0]) == 1 for v in det}
    if len(sides) > 1:
        return res
    det_up = sides.pop() if sides else None
    left = [v for v in circle if v not in det]
    units = list(inner) + (["C"] if circle else [])
    for bits in itertools.product((0, 1), repeat=len(units)):
        up = {u for u, b in zip(units, bits) if b}
        if det and ("C" in up) == det_up:
            continue
        group = {}
        for u, b in zip(units, bits):
            for v in (left if u == "C" else [u]):
                group[v] = b
        for v in det:
            group[v] = int(det_up)
        if len(set(group.values())) < 2:
            # one group only makes sense when the whole circle became periodic
            if not det or left or ("C" in up) == det_up:
                continue
        new = _apply_level_split(d, group, circle, det)
        if new is not None and _accept(d, new):
            kind = "unpinch" if det else "level-split"
            site = tuple(sorted(v for v, g in group.items() if g))
            res.append((MoveKind(kind, site + tuple(det), len(det)), new))
    return res


def _apply_level_split(d, group, circle, det):
    """Re-route separatrices after raising the vertices of group 1.

    No darts are created, so dart numbers of ``d`` stay valid throughout.
    """
    w = _Work(d)
    for v in det:
        w.kinds[v] = SaddleKind(INTERIOR, d.kinds[v].two_k)
        w.hole.discard(d.vertex_darts[v][-1])
    hole = w.hole

    def color(x):
        if x in hole:
            return 0
        return -1 if d.out[x] else 1

    def grp(x):
        return group.get(d.vertex[x])

    members = [x for x in range(d.n_darts) if d.vertex[x] in group]
    new_twin = {}
    for x in members:
        g = grp(x)
        if grp(d.twin[x]) == g:
            continue
        bad = -1 if g == 1 else 1  # raised pieces follow faces above them, lowered ones below
        cw_ok = color(d.rot_inv[x]) != bad
        ccw_ok = color(x) != bad
        if cw_ok == ccw_ok:
            return None
        c = d.twin[x]
        for _ in range(d.n_darts + 1):
            if grp(c) == g:
                break
            c = d.twin[d.rot[c]] if cw_ok else d.twin[d.rot_inv[c]]
        else:
            return None
        new_twin[x] = c
    for x, c in new_twin.items():
        if new_twin.get(c) != x:
            return None
        w.twin[x] = c
    skel = make(d.surface, w.kinds, w.vertex, w.rot, w.twin, w.out, w.hole)

    left = [v for v in circle if v not in det]
    target = {}
    for f in {d.face_of[x] for x in members}:
        corners = d.faces[f]
        col = d.face_color[f]
        if col == 0:
            target[f] = next((x for x in corners if x in hole), None)
        else:
            want = 1 if col == 1 else 0
            pref = [x for x in corners if grp(x) == want]
            target[f] = pref[0] if pref else corners[0]
    contents = []
    for x, c in d.contents:
        f = d.face_of[x]
        if f in target:
            if target[f] is None:
                continue  # the hole of a circle without saddles
            x = target[f]
        if isinstance(c, NestedComponent):
            c = NestedComponent(target.get(d.face_of[c.face], c.face))
        contents.append((x, c))

    pieces = {skel.component_of[x] for x in members}
    filled = {skel.face_of[x] for x, _ in contents}
    empty = [f for f, ds in enumerate(skel.faces)
             if f not in filled and skel.component_of[ds[0]] in pieces]
    if det and not left:
        hf = {skel.face_of[d.vertex_darts[v][-1]] for v in det}
        if len(pieces) != 1 or empty != list(hf):
            return None
        contents.append((skel.faces[empty[0]][0], PeriodicBoundary()))
    else:
        if len(pieces) != 2 or len(empty) != 2:
            return None
        f1, f2 = empty
        if skel.component_of[skel.faces[f1][0]] == skel.component_of[skel.faces[f2][0]]:
            return None
        a, b = skel.faces[f1][0], skel.faces[f2][0]
        contents.append((a, NestedComponent(b)))
        contents.append((b, NestedComponent(a)))
    w.contents = contents
    return w.freeze()


def all_moves(d: FlowDiagram, multi_detach: bool = True) -> list:
    return whitehead_splits(d) + connection_splits(d, multi_detach)


def covers(cls, atlas, multi_detach: bool = True) -> set:
    """Codes of the classes one step less degenerate than ``cls``."""
    code = getattr(cls, "code", cls)
    found = atlas.by_code.get(code)
    if found is None:
        raise UnknownClass(code)
    merge = atlas.request.merge_mirrors
    res = set()
    for _, new in all_moves(found.diagram, multi_detach):
        c = new.canonical_code
        if merge:
            c = min(c, new.mirror().canonical_code)
        res.add(c)
    return res


@dataclass
class ClosureReport:
    escapees: list  # (class id, target code) pairs whose target is not in the atlas
    bad_codim: list  # (class id, target id) pairs that do not drop codim by one

    @property
    def ok(self) -> bool:
        return not self.escapees and not self.bad_codim


def closure_check(atlas, multi_detach: bool = True) -> ClosureReport:
    """Every move of every class must land on a class of the atlas, one codim lower."""
    by_code = atlas.by_code
    esc, bad = [], []
    for c in atlas.classes:
        for code in sorted(covers(c, atlas, multi_detach)):
            t = by_code.get(code)
            if t is None:
                esc.append((c.id, code.hex()))
            elif t.codim != c.codim - 1:
                bad.append((c.id, t.id))
    return ClosureReport(esc, bad)
