"""Multi-saddle connection diagrams stored as labeled planar combinatorial maps.

Each separatrix is split into two darts.  ``rot[d]`` is the next dart
counter-clockwise around the vertex of ``d`` and ``twin[d]`` is the other half
of the same separatrix.  ``out[d]`` is true when the flow leaves the vertex
along ``d``.

The corner of a dart ``d`` is the sector between ``d`` and ``rot[d]``.  With the
flow ``X = (-H_y, H_x)`` the Hamiltonian grows to the right of the flow, so the
corner of an outgoing dart lies below the separatrix level (colour -1) and the
corner of an incoming dart lies above it (colour +1).  A +1 face therefore
holds a local maximum (a clockwise center) and a -1 face a local minimum.

A boundary k-saddle has darts ``A, i_1 .. i_2k, B`` in counter-clockwise order.
``A`` and ``B`` run along the boundary circle and the corner of ``B`` looks into
the hole; ``hole`` lists these ``B`` darts.

Complementary regions are annuli, so each face holds exactly one content: a
center, the periodic boundary, the hole, or a link to a face of another
connection.  Links are symmetric and together form a tree.
"""
from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

INTERIOR = "interior"
BOUNDARY = "boundary"


class DiagramError(ValueError):
    check = "diagram"


class FakeSaddlePresent(DiagramError):
    check = "no-fake-saddle"


class DirectionInconsistent(DiagramError):
    check = "direction"


class NonPlanar(DiagramError):
    check = "planarity"


class FaceContentViolation(DiagramError):
    check = "face-content"


class IndexSumMismatch(DiagramError):
    check = "index-sum"


@dataclass(frozen=True, order=True)
class SaddleKind:
    """A multi-saddle; the weight k is stored doubled as ``two_k``."""

    placement: str
    two_k: int

    @property
    def k(self) -> Fraction:
        return Fraction(self.two_k, 2)

    @property
    def is_fake(self) -> bool:
        if self.placement == INTERIOR:
            return self.two_k < 2 or self.two_k % 2
        return self.two_k < 1

    @property
    def degree(self) -> int:
        # interior: 2k+2 separatrices; boundary: A, 2k interior darts, B
        return self.two_k + 2

    @property
    def tag(self) -> str:
        return ("i" if self.placement == INTERIOR else "b") + str(self.two_k)


def interior(k: int) -> SaddleKind:
    return SaddleKind(INTERIOR, 2 * k)


def boundary(two_k: int) -> SaddleKind:
    return SaddleKind(BOUNDARY, two_k)


def index(v) -> Fraction:
    """Index of a center (``"center"``) or of a :class:`SaddleKind`."""
    if v == "center":
        return Fraction(1)
    return -v.k


def codim_saddle(s: SaddleKind) -> int:
    if s.is_fake:
        raise FakeSaddlePresent(f"fake saddle {s}")
    if s.placement == INTERIOR:
        return s.two_k - 2
    return s.two_k - 1


@dataclass(frozen=True)
class Surface:
    genus: int = 0
    boundaries: int = 0

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus - self.boundaries

    @property
    def name(self) -> str:
        if self.genus == 0 and self.boundaries == 0:
            return "sphere"
        if self.genus == 0 and self.boundaries == 1:
            return "disk"
        return f"g{self.genus}p{self.boundaries}"


SPHERE = Surface(0, 0)
DISK = Surface(0, 1)


# face contents

@dataclass(frozen=True)
class CenterSlot:
    cw: bool

    @property
    def tag(self):
        return "cw" if self.cw else "ccw"


@dataclass(frozen=True)
class PeriodicBoundary:
    circle: int = 0
    tag = "p"


@dataclass(frozen=True)
class BoundaryHole:
    circle: int = 0
    tag = "h"


@dataclass(frozen=True)
class NestedComponent:
    """Link to the face of another connection holding ``face`` in its corners."""

    face: int
    tag = "l"


@dataclass(frozen=True)
class Connection:
    index: int
    vertices: tuple
    darts: tuple
    n_boundary: int  # boundary saddles
    n_m: int  # multi-saddles off the boundary
    n_circles: int
    codim_m: int
    k0: int = 0

    @property
    def codim_h(self) -> int:
        return self.n_circles + self.n_m - 1

    @property
    def codim(self) -> int:
        return self.k0 + self.codim_m + self.codim_h


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    message: str = ""


_ERRORS = {c.check: c for c in
           (FakeSaddlePresent, DirectionInconsistent, NonPlanar, FaceContentViolation, IndexSumMismatch)}


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.ok]

    def raise_for_errors(self):
        for c in self.checks:
            if not c.ok:
                raise _ERRORS[c.name](c.message)


@dataclass(frozen=True)
class FlowDiagram:
    surface: Surface
    kinds: tuple  # SaddleKind per vertex
    vertex: tuple  # vertex per dart
    rot: tuple
    twin: tuple
    out: tuple
    hole: tuple = ()  # B darts of boundary saddles
    contents: tuple = ()  # (dart, content) with the content in the face of corner(dart)
    bare: tuple | None = None  # contents at both ends when there are no saddles

    def __post_init__(self):
        n = len(self.vertex)
        if not (len(self.rot) == len(self.twin) == len(self.out) == n):
            raise ValueError("dart arrays differ in length")
        if sorted(self.rot) != list(range(n)) or sorted(self.twin) != list(range(n)):
            raise ValueError("rot and twin must be permutations")
        for d in range(n):
            if self.twin[d] == d or self.twin[self.twin[d]] != d:
                raise ValueError("twin must be a fixed-point free involution")
            if self.vertex[self.rot[d]] != self.vertex[d]:
                raise ValueError("rot must preserve vertices")
            if not 0 <= self.vertex[d] < len(self.kinds):
                raise ValueError("unknown vertex")
        if n == 0 and (self.bare is None or len(self.bare) != 2):
            raise ValueError("a diagram without saddles needs its two end contents")

    # basic structure

    @property
    def n_darts(self) -> int:
        return len(self.vertex)

    @cached_property
    def rot_inv(self) -> tuple:
        inv = [0] * self.n_darts
        for d, r in enumerate(self.rot):
            inv[r] = d
        return tuple(inv)

    @cached_property
    def vertex_darts(self) -> tuple:
        """Darts of each vertex in counter-clockwise order (A first on the boundary)."""
        hole = set(self.hole)
        res = []
        for v in range(len(self.kinds)):
            ds = [d for d in range(self.n_darts) if self.vertex[d] == v]
            if not ds:
                res.append(())
                continue
            start = min(ds)
            for d in ds:
                if d in hole:
                    start = self.rot[d]
            cyc = [start]
            while self.rot[cyc[-1]] != start:
                cyc.append(self.rot[cyc[-1]])
            res.append(tuple(cyc))
        return tuple(res)

    @cached_property
    def faces(self) -> tuple:
        """Faces as tuples of corner darts, walking corner(d) -> corner(twin(rot d))."""
        seen = [False] * self.n_darts
        faces = []
        for d in range(self.n_darts):
            if seen[d]:
                continue
            f = []
            c = d
            while not seen[c]:
                seen[c] = True
                f.append(c)
                c = self.twin[self.rot[c]]
            faces.append(tuple(f))
        return tuple(faces)

    @cached_property
    def face_of(self) -> tuple:
        fo = [0] * self.n_darts
        for i, f in enumerate(self.faces):
            for c in f:
                fo[c] = i
        return tuple(fo)

    def corner_color(self, d) -> int:
        if d in self._hole_set:
            return 0
        return -1 if self.out[d] else 1

    @cached_property
    def _hole_set(self):
        return frozenset(self.hole)

    @cached_property
    def face_color(self) -> tuple:
        """+1, -1, 0 for the hole, or None for an inconsistent face."""
        res = []
        for f in self.faces:
            cols = {self.corner_color(c) for c in f}
            if cols == {0}:
                res.append(0)
            elif len(cols) == 1:
                res.append(cols.pop())
            else:
                res.append(None)
        return tuple(res)

    @cached_property
    def components(self) -> tuple:
        """Dart sets of the connected pieces of the saddle graph."""
        comp = [-1] * self.n_darts
        comps = []
        for d in range(self.n_darts):
            if comp[d] >= 0:
                continue
            idx = len(comps)
            stack = [d]
            comp[d] = idx
            members = []
            while stack:
                x = stack.pop()
                members.append(x)
                for y in (self.rot[x], self.twin[x]):
                    if comp[y] < 0:
                        comp[y] = idx
                        stack.append(y)
            comps.append(tuple(sorted(members)))
        return tuple(comps)

    @cached_property
    def component_of(self) -> tuple:
        co = [0] * self.n_darts
        for i, ds in enumerate(self.components):
            for d in ds:
                co[d] = i
        return tuple(co)

    @cached_property
    def face_contents(self) -> dict:
        fc = {}
        for d, c in self.contents:
            fc.setdefault(self.face_of[d], []).append(c)
        return fc

    def content_of_face(self, f):
        cs = self.face_contents.get(f, [])
        return cs[0] if len(cs) == 1 else None

    # counts

    @property
    def centers(self) -> tuple:
        """(i_minus, i_plus): clockwise and counter-clockwise centers."""
        cs = [c for _, c in self.contents if isinstance(c, CenterSlot)]
        if self.bare:
            cs += [c for c in self.bare if isinstance(c, CenterSlot)]
        return sum(c.cw for c in cs), sum(not c.cw for c in cs)

    @property
    def n_periodic(self) -> int:
        cs = [c for _, c in self.contents] + list(self.bare or ())
        return sum(isinstance(c, PeriodicBoundary) for c in cs)

    @cached_property
    def used_kinds(self) -> tuple:
        used = set(self.vertex)
        return tuple(self.kinds[v] for v in sorted(used))

    def census(self) -> dict:
        cw, ccw = self.centers
        cnt = Counter(self.used_kinds)
        saddles = [{"placement": k.placement, "two_k": k.two_k, "count": n}
                   for k, n in sorted(cnt.items())]
        if self.surface.boundaries == 0:
            state = None
        else:
            state = "saddled" if self.hole else "periodic"
        return {"centers_cw": cw, "centers_ccw": ccw, "saddles": saddles, "boundary": state}

    def index_sum(self) -> Fraction:
        s = Fraction(sum(self.centers))
        for k in self.used_kinds:
            s += index(k)
        return s

    # connections and codimension

    def connections(self) -> list:
        res = []
        for i, ds in enumerate(self.components):
            vs = sorted({self.vertex[d] for d in ds})
            kinds = [self.kinds[v] for v in vs]
            nb = sum(k.placement == BOUNDARY for k in kinds)
            holes = {self.face_of[d] for d in ds if d in self._hole_set}
            res.append(Connection(
                index=i, vertices=tuple(vs), darts=ds, n_boundary=nb,
                n_m=len(vs) - nb, n_circles=len(holes),
                codim_m=sum(codim_saddle(k) for k in kinds)))
        return res

    def codim(self) -> int:
        return sum(c.codim for c in self.connections())

    # canonical form

    def _face_tag(self, f, sub) -> str:
        c = self.content_of_face(f)
        if c is None:
            return "?" + str(self.face_color[f])
        if isinstance(c, NestedComponent):
            return "l(" + sub(self.face_of[c.face]) + ")"
        return c.tag

    def _traverse(self, root, entry, sub) -> str:
        num = {root: 0}
        order = [root]
        parts = []
        i = 0
        while i < len(order):
            d = order[i]
            i += 1
            r, t = self.rot[d], self.twin[d]
            for x in (r, t):
                if x not in num:
                    num[x] = len(order)
                    order.append(x)
            f = self.face_of[d]
            lab = "^" if f == entry else self._face_tag(f, sub)
            parts.append(f"{num[r]},{num[t]},{self.kinds[self.vertex[d]].tag},"
                         f"{'o' if self.out[d] else 'i'},{lab};")
        return "".join(parts)

    @cached_property
    def canonical_code(self) -> bytes:
        head = f"g{self.surface.genus}p{self.surface.boundaries}|"
        if self.n_darts == 0:
            return (head + "bare:" + "+".join(sorted(c.tag for c in self.bare))).encode()
        memo = {}

        def sub(f):
            if f not in memo:
                memo[f] = "#"  # guards against a cyclic link structure
                memo[f] = min(self._traverse(d, f, sub) for d in self.faces[f])
            return memo[f]

        best = min(self._traverse(d, None, sub) for d in range(self.n_darts))
        return (head + best).encode()

    def mirror(self) -> "FlowDiagram":
        """Image under an orientation-reversing homeomorphism."""
        rot = self.rot_inv

        def flip(c):
            if isinstance(c, CenterSlot):
                return CenterSlot(not c.cw)
            if isinstance(c, NestedComponent):
                return NestedComponent(self.rot[c.face])
            return c

        return make(self.surface, dict(enumerate(self.kinds)), dict(enumerate(self.vertex)),
                    dict(enumerate(rot)), dict(enumerate(self.twin)), dict(enumerate(self.out)),
                    {self.rot[b] for b in self.hole},
                    [(self.rot[d], flip(c)) for d, c in self.contents],
                    None if self.bare is None else tuple(flip(c) for c in self.bare))

    def relabel(self, dart_perm, vertex_perm=None) -> "FlowDiagram":
        """Rename darts (and vertices); the result is isomorphic to ``self``."""
        p = list(dart_perm)
        q = list(vertex_perm) if vertex_perm is not None else list(range(len(self.kinds)))
        n = self.n_darts
        kinds = [None] * len(self.kinds)
        for v, k in enumerate(self.kinds):
            kinds[q[v]] = k
        vertex, rot, twin, out = [0] * n, [0] * n, [0] * n, [False] * n
        for d in range(n):
            vertex[p[d]] = q[self.vertex[d]]
            rot[p[d]] = p[self.rot[d]]
            twin[p[d]] = p[self.twin[d]]
            out[p[d]] = self.out[d]

        def mv(c):
            return NestedComponent(p[c.face]) if isinstance(c, NestedComponent) else c

        contents = tuple(sorted(((p[d], mv(c)) for d, c in self.contents), key=lambda x: x[0]))
        return FlowDiagram(self.surface, tuple(kinds), tuple(vertex), tuple(rot), tuple(twin),
                           tuple(out), tuple(sorted(p[b] for b in self.hole)), contents, self.bare)

    # serialisation

    def to_json(self) -> dict:
        return {
            "surface": {"genus": self.surface.genus, "boundaries": self.surface.boundaries},
            "vertices": [{"placement": k.placement, "two_k": k.two_k} for k in self.kinds],
            "dart_vertex": list(self.vertex),
            "rotation": list(self.rot),
            "twin": list(self.twin),
            "direction": ["out" if o else "in" for o in self.out],
            "hole": list(self.hole),
            "contents": [dict(dart=d, **_content_json(c)) for d, c in self.contents],
            "bare": None if self.bare is None else [_content_json(c) for c in self.bare],
        }

    @classmethod
    def from_json(cls, obj) -> "FlowDiagram":
        s = obj["surface"]
        bare = obj.get("bare")
        return cls(
            Surface(int(s["genus"]), int(s["boundaries"])),
            tuple(SaddleKind(v["placement"], int(v["two_k"])) for v in obj["vertices"]),
            tuple(obj["dart_vertex"]), tuple(obj["rotation"]), tuple(obj["twin"]),
            tuple(x == "out" for x in obj["direction"]), tuple(obj.get("hole", ())),
            tuple((c["dart"], _content_from_json(c)) for c in obj.get("contents", ())),
            None if bare is None else tuple(_content_from_json(c) for c in bare))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _content_json(c) -> dict:
    if isinstance(c, CenterSlot):
        return {"type": "center", "orientation": "cw" if c.cw else "ccw"}
    if isinstance(c, PeriodicBoundary):
        return {"type": "periodic", "circle": c.circle}
    if isinstance(c, BoundaryHole):
        return {"type": "hole", "circle": c.circle}
    return {"type": "nested", "face": c.face}


def _content_from_json(obj):
    t = obj["type"]
    if t == "center":
        return CenterSlot(obj["orientation"] == "cw")
    if t == "periodic":
        return PeriodicBoundary(obj.get("circle", 0))
    if t == "hole":
        return BoundaryHole(obj.get("circle", 0))
    if t == "nested":
        return NestedComponent(obj["face"])
    raise ValueError(f"unknown content type {t!r}")


def make(surface, kinds, vertex, rot, twin, out, hole=(), contents=(), bare=None) -> FlowDiagram:
    """Build a compact :class:`FlowDiagram` from dictionaries keyed by arbitrary ints.

    Contents may name any dart whose corner lies in the intended face; nested links
    may name any dart of the partner face.  Both are normalised to the smallest
    dart of the face.
    """
    darts = sorted(vertex)
    dmap = {d: i for i, d in enumerate(darts)}
    used = sorted({vertex[d] for d in darts})
    vmap = {v: i for i, v in enumerate(used)}
    n = len(darts)
    pre = FlowDiagram(
        surface, tuple(kinds[v] for v in used),
        tuple(vmap[vertex[d]] for d in darts),
        tuple(dmap[rot[d]] for d in darts),
        tuple(dmap[twin[d]] for d in darts),
        tuple(bool(out[d]) for d in darts),
        tuple(sorted(dmap[b] for b in hole)), (), bare)
    rep = [0] * n
    for f in pre.faces:
        m = min(f)
        for c in f:
            rep[c] = m

    def norm(c):
        if isinstance(c, NestedComponent):
            return NestedComponent(rep[dmap[c.face]])
        return c

    cs = sorted(((rep[dmap[d]], norm(c)) for d, c in contents), key=lambda x: (x[0], repr(x[1])))
    return FlowDiagram(pre.surface, pre.kinds, pre.vertex, pre.rot, pre.twin, pre.out,
                       pre.hole, tuple(cs), bare)


def bare_diagram(surface, a, b) -> FlowDiagram:
    return FlowDiagram(surface, (), (), (), (), (), (), (), (a, b))


# validation

def _check_fake(d):
    bad = [k for k in d.used_kinds if k.is_fake]
    return "" if not bad else f"fake multi-saddles {bad}"


def _check_direction(d):
    hole = d._hole_set
    for v, ds in enumerate(d.vertex_darts):
        if not ds:
            continue
        k = d.kinds[v]
        if len(ds) != k.degree:
            return f"vertex {v} has {len(ds)} darts, {k} needs {k.degree}"
        hs = [x for x in ds if x in hole]
        if k.placement == INTERIOR and hs:
            return f"interior vertex {v} touches the hole"
        if k.placement == BOUNDARY and len(hs) != 1:
            return f"boundary vertex {v} needs exactly one hole corner"
        for x in ds:
            if x in hole:
                continue
            if d.out[x] == d.out[d.rot[x]]:
                return f"directions do not alternate at dart {x}"
    for x in range(d.n_darts):
        if d.out[x] == d.out[d.twin[x]]:
            return f"separatrix at dart {x} is not consistently directed"
    on_circle = set(hole) | {d.rot[b] for b in hole}
    for x in on_circle:
        if d.twin[x] not in on_circle:
            return f"boundary arc at dart {x} leaves the circle"
    for b in hole:
        a = d.twin[b]
        if a in hole:
            return f"boundary arc at dart {b} is malformed"
    for i, f in enumerate(d.faces):
        if d.face_color[i] is None:
            return f"face {i} is not a consistently directed circulation"
        if d.face_color[i] == 0 and any(c not in hole for c in f):
            return f"face {i} mixes hole and interior corners"
    return ""


def _check_planar(d):
    for i, ds in enumerate(d.components):
        dset = set(ds)
        nv = len({d.vertex[x] for x in ds})
        ne = len(ds) // 2
        nf = len({d.face_of[x] for x in ds})
        if nv - ne + nf != 2:
            return f"connection {i} has V-E+F = {nv - ne + nf}"
    return ""


def _check_contents(d):
    if d.n_darts == 0:
        tags = sorted(c.tag for c in d.bare)
        if d.surface.boundaries == 0:
            ok = tags == ["ccw", "cw"]
        elif d.surface.boundaries == 1:
            ok = len(tags) == 2 and "p" in tags and any(t in ("cw", "ccw") for t in tags)
        else:
            ok = tags == ["p", "p"]
        return "" if ok else f"bare diagram cannot hold {tags}"
    if d.bare is not None:
        return "bare contents on a diagram with saddles"
    n_holes = 0
    for i, f in enumerate(d.faces):
        cs = d.face_contents.get(i, [])
        if len(cs) != 1:
            return f"face {i} holds {len(cs)} contents"
        c = cs[0]
        col = d.face_color[i]
        if col == 0:
            n_holes += 1
            if not isinstance(c, BoundaryHole):
                return f"hole face {i} holds {c}"
            continue
        if isinstance(c, BoundaryHole):
            return f"face {i} is not a hole"
        if isinstance(c, CenterSlot) and (col == 1) != c.cw:
            return f"face {i} of colour {col} cannot hold a {c.tag} center"
        if isinstance(c, NestedComponent):
            if c.face < 0 or c.face >= d.n_darts:
                return f"face {i} links to an unknown dart"
            g = d.face_of[c.face]
            back = d.content_of_face(g)
            if not isinstance(back, NestedComponent) or d.face_of[back.face] != i:
                return f"link from face {i} is not symmetric"
            if d.component_of[f[0]] == d.component_of[d.faces[g][0]]:
                return f"face {i} links inside its own connection"
            if d.face_color[g] != -col:
                return f"linked faces {i} and {g} have equal colours"
    circles = n_holes + d.n_periodic
    if circles != d.surface.boundaries:
        return f"{circles} boundary circles on a surface with {d.surface.boundaries}"
    # link tree
    nc = len(d.components)
    parent = list(range(nc))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = 0
    for x, c in d.contents:
        if isinstance(c, NestedComponent) and x < c.face:
            a, b = find(d.component_of[x]), find(d.component_of[c.face])
            if a == b:
                return "links between connections contain a cycle"
            parent[a] = b
            edges += 1
    if edges != nc - 1:
        return "links between connections do not form a tree"
    return ""


def _check_index(d):
    s = d.index_sum()
    if s != d.surface.chi:
        return f"index sum {s} differs from Euler characteristic {d.surface.chi}"
    return ""


def validate_diagram(d: FlowDiagram) -> ValidationReport:
    checks = []
    for name, fn in (("no-fake-saddle", _check_fake), ("direction", _check_direction),
                     ("planarity", _check_planar), ("face-content", _check_contents),
                     ("index-sum", _check_index)):
        msg = fn(d)
        checks.append(Check(name, not msg, msg))
        # later checks rely on earlier structure
        if msg and name in ("direction", "planarity"):
            for rest in ("planarity", "face-content", "index-sum"):
                if rest not in [c.name for c in checks]:
                    checks.append(Check(rest, False, "skipped: " + msg))
            break
    return ValidationReport(tuple(checks))


def connections(d: FlowDiagram) -> list:
    return d.connections()


def codim_connection(c: Connection) -> int:
    return c.codim


def codim_diagram(d: FlowDiagram) -> int:
    return d.codim()


def canonical_code(d: FlowDiagram, merge_mirrors: bool = False) -> bytes:
    if merge_mirrors:
        return min(d.canonical_code, d.mirror().canonical_code)
    return d.canonical_code


@dataclass(frozen=True)
class EquivClass:
    code: bytes
    codim: int
    centers: tuple
    census: dict
    surface: Surface
    diagram: FlowDiagram

    @property
    def id(self) -> str:
        return self.code.hex()


def classify(d: FlowDiagram, merge_mirrors: bool = False) -> EquivClass:
    return EquivClass(canonical_code(d, merge_mirrors), d.codim(), d.centers, d.census(),
                      d.surface, d)
