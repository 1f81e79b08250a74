"""Finite posets, read as finite T0-spaces under the specialization order.

``x <= y`` means x lies in the closure of y: degenerate classes sit low and
structurally stable ones are maximal (open points).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple
    below: dict = field(compare=False)  # strict downsets
    codim: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_relations(cls, elements, pairs, codim=None):
        """Poset generated by ``(lower, upper)`` pairs; the transitive closure is taken."""
        elements = tuple(elements)
        direct = {x: set() for x in elements}
        for lo, up in pairs:
            if lo == up:
                continue
            direct[up].add(lo)
        below = {}

        def visit(x, stack):
            if x in below:
                return below[x]
            if x in stack:
                raise ValueError("relation has a cycle; not a partial order")
            stack.add(x)
            acc = set()
            for y in direct[x]:
                acc.add(y)
                acc |= visit(y, stack)
            stack.discard(x)
            below[x] = frozenset(acc)
            return below[x]

        for x in elements:
            visit(x, set())
        return cls(elements, below, dict(codim or {}))

    def __len__(self):
        return len(self.elements)

    def leq(self, x, y) -> bool:
        return x == y or x in self.below[y]

    @cached_property
    def above(self) -> dict:
        up = {x: set() for x in self.elements}
        for y in self.elements:
            for x in self.below[y]:
                up[x].add(y)
        return {x: frozenset(s) for x, s in up.items()}

    @cached_property
    def covers(self) -> tuple:
        """Hasse edges ``(lower, upper)``."""
        res = []
        for y in self.elements:
            for x in self.below[y]:
                if not any(x in self.below[z] for z in self.below[y]):
                    res.append((x, y))
        return tuple(sorted(res, key=lambda e: (self._pos[e[0]], self._pos[e[1]])))

    @cached_property
    def _pos(self):
        return {x: i for i, x in enumerate(self.elements)}

    def lower_covers(self, x) -> list:
        return [a for a, b in self.covers if b == x]

    def upper_covers(self, x) -> list:
        return [b for a, b in self.covers if a == x]

    def downset(self, x) -> frozenset:
        return self.below[x] | {x}

    def upset(self, x) -> frozenset:
        return self.above[x] | {x}

    def subposet(self, keep) -> "FinitePoset":
        keep = set(keep)
        els = tuple(x for x in self.elements if x in keep)
        below = {x: self.below[x] & keep for x in els}
        return FinitePoset(els, below, {x: c for x, c in self.codim.items() if x in keep})

    def without(self, x) -> "FinitePoset":
        return self.subposet(set(self.elements) - {x})

    def connected_components(self) -> list:
        seen = set()
        comps = []
        for x in self.elements:
            if x in seen:
                continue
            stack, comp = [x], set()
            while stack:
                y = stack.pop()
                if y in comp:
                    continue
                comp.add(y)
                stack.extend(self.below[y] | self.above[y])
            seen |= comp
            comps.append(self.subposet(comp))
        return comps

    def dimension(self) -> int:
        """Length of the longest chain."""
        h = self.heights()
        return max(h.values()) if h else -1

    def heights(self) -> dict:
        """Length of the longest chain having x as its maximum."""
        h = {}

        def height(x):
            if x not in h:
                h[x] = 1 + max((height(y) for y in self.below[x]), default=-1)
            return h[x]

        for x in self.elements:
            height(x)
        return h

    def to_json(self) -> dict:
        return {"nodes": [{"id": x, "codim": self.codim.get(x)} for x in self.elements],
                "covers": [[a, b] for a, b in self.covers]}

    @classmethod
    def from_json(cls, obj) -> "FinitePoset":
        els = [n["id"] for n in obj["nodes"]]
        codim = {n["id"]: n["codim"] for n in obj["nodes"] if n.get("codim") is not None}
        return cls.from_relations(els, [tuple(e) for e in obj["covers"]], codim)


def build_poset(atlas, multi_detach: bool = True) -> FinitePoset:
    """Degeneration poset of an atlas: for every class c and every d in covers(c), c < d."""
    from .moves import covers

    pairs = []
    ids = {c.code: c.id for c in atlas.classes}
    for c in atlas.classes:
        for code in sorted(covers(c, atlas, multi_detach)):
            if code in ids:
                pairs.append((c.id, ids[code]))
    return FinitePoset.from_relations([c.id for c in atlas.classes], pairs,
                                      {c.id: c.codim for c in atlas.classes})


def downset(p: FinitePoset, x) -> frozenset:
    return p.downset(x)


def upset(p: FinitePoset, x) -> frozenset:
    return p.upset(x)


def connected_components(p: FinitePoset) -> list:
    return p.connected_components()


def hasse_dot(p: FinitePoset, paper_orientation: bool = False, labels=None) -> str:
    """DOT digraph ranked by codimension with edges from upper to lower elements.

    ``paper_orientation`` reverses the edges, drawing degenerate classes on top.
    """
    labels = labels or {}
    name = {x: f"n{i}" for i, x in enumerate(p.elements)}
    lines = ["digraph hasse {", "  rankdir=TB;"]
    if p.codim:
        for k in sorted(set(p.codim.values())):
            members = " ".join(f"{name[x]};" for x in p.elements if p.codim.get(x) == k)
            lines.append(f"  {{ rank=same; {members} }}")
    for x in p.elements:
        lab = labels.get(x, str(x))
        extra = f", codim={p.codim[x]}" if x in p.codim else ""
        lines.append(f'  {name[x]} [label="{lab}", id="{x}"{extra}];')
    for lo, up in p.covers:
        a, b = (lo, up) if paper_orientation else (up, lo)
        lines.append(f"  {name[a]} -> {name[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_NODE = re.compile(r'^\s*(n\d+) \[label="[^"]*", id="([^"]*)"(?:, codim=(\d+))?\];$')
_EDGE = re.compile(r"^\s*(n\d+) -> (n\d+);$")


def parse_dot(text: str, paper_orientation: bool = False) -> FinitePoset:
    """Inverse of :func:`hasse_dot` (ids come back as strings)."""
    ids, codim, pairs = {}, {}, []
    for line in text.splitlines():
        m = _NODE.match(line)
        if m:
            ids[m.group(1)] = m.group(2)
            if m.group(3) is not None:
                codim[m.group(2)] = int(m.group(3))
            continue
        m = _EDGE.match(line)
        if m:
            a, b = ids[m.group(1)], ids[m.group(2)]
            pairs.append((a, b) if paper_orientation else (b, a))
    return FinitePoset.from_relations(list(ids.values()), pairs, codim)
