"""Beat points, cores, order complexes and simplicial homology of finite spaces."""
from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from math import gcd

import networkx as nx

from .poset import FinitePoset


def beat_points(p: FinitePoset):
    """(down, up): x is a down beat point when its strict downset has a maximum,
    i.e. x has exactly one lower cover; dually for up beat points."""
    lower = defaultdict(int)
    upper = defaultdict(int)
    for a, b in p.covers:
        lower[b] += 1
        upper[a] += 1
    down = [x for x in p.elements if lower[x] == 1]
    up = [x for x in p.elements if upper[x] == 1]
    return down, up


def removal_sequence(p: FinitePoset, rng: random.Random | None = None):
    """Remove beat points until none is left; returns (core, removed elements)."""
    removed = []
    while True:
        down, up = beat_points(p)
        cand = list(dict.fromkeys(down + up))
        if not cand:
            return p, removed
        if rng is None:
            x = min(cand, key=lambda e: (str(e), e) if not isinstance(e, int) else ("", e))
        else:
            x = rng.choice(cand)
        removed.append(x)
        p = p.without(x)


def core(p: FinitePoset, rng: random.Random | None = None) -> FinitePoset:
    return removal_sequence(p, rng)[0]


def is_contractible(p: FinitePoset) -> bool:
    return len(core(p)) == 1


def hasse_graph(p: FinitePoset) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(p.elements)
    g.add_edges_from(p.covers)
    return g


def isomorphic(p: FinitePoset, q: FinitePoset) -> bool:
    return len(p) == len(q) and nx.is_isomorphic(hasse_graph(p), hasse_graph(q))


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple
    simplices: tuple  # sorted tuples of vertex positions, grouped by size

    @classmethod
    def from_facets(cls, facets):
        facets = [tuple(f) for f in facets]
        verts = sorted({v for f in facets for v in f})
        pos = {v: i for i, v in enumerate(verts)}
        faces = set()
        for f in facets:
            s = tuple(sorted(pos[v] for v in f))
            for r in range(1, len(s) + 1):
                faces.update(itertools.combinations(s, r))
        return cls(tuple(verts), tuple(sorted(faces, key=lambda s: (len(s), s))))

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def by_dim(self, k) -> list:
        return [s for s in self.simplices if len(s) == k + 1]

    def is_closed(self) -> bool:
        have = set(self.simplices)
        return all(f in have for s in self.simplices if len(s) > 1
                   for f in itertools.combinations(s, len(s) - 1))

    def face_list(self) -> str:
        """One simplex per line, vertex ids separated by spaces."""
        return "".join(" ".join(str(self.vertices[i]) for i in s) + "\n" for s in self.simplices)


def order_complex(p: FinitePoset) -> SimplicialComplex:
    """Simplices are the nonempty chains of p."""
    pos = {x: i for i, x in enumerate(p.elements)}
    chains = []

    def extend(chain, cands):
        chains.append(tuple(sorted(pos[x] for x in chain)))
        for y in cands:
            # grow downward so every chain is produced once
            extend(chain + [y], [z for z in cands if z in p.below[y]])

    for x in p.elements:
        extend([x], [y for y in p.elements if y in p.below[x]])
    chains.sort(key=lambda s: (len(s), s))
    return SimplicialComplex(tuple(p.elements), tuple(chains))


def boundary_entries(k: SimplicialComplex, dim: int) -> tuple:
    """Sparse boundary map C_dim -> C_{dim-1} as ({(row, col): coeff}, rows, cols)."""
    rows = {s: i for i, s in enumerate(k.by_dim(dim - 1))}
    cols = k.by_dim(dim)
    ent = {}
    if dim == 0:
        return ent, 0, len(cols)
    for j, s in enumerate(cols):
        for t in range(len(s)):
            face = s[:t] + s[t + 1:]
            ent[(rows[face], j)] = -1 if t % 2 else 1
    return ent, len(rows), len(cols)


def smith_diagonal(entries: dict) -> list:
    """Nonzero diagonal of an integer diagonalisation of a sparse matrix.

    Only unimodular row and column operations are used, so the cokernel is the
    direct sum of Z/d over the returned d plus a free part.
    """
    rows = defaultdict(dict)
    cols = defaultdict(dict)
    for (i, j), v in entries.items():
        if v:
            rows[i][j] = v
            cols[j][i] = v

    def set_(i, j, v):
        if v:
            rows[i][j] = v
            cols[j][i] = v
        else:
            rows[i].pop(j, None)
            cols[j].pop(i, None)

    def add_row(dst, src, q):  # row dst += q * row src
        for j, v in list(rows[src].items()):
            set_(dst, j, rows[dst].get(j, 0) + q * v)

    def add_col(dst, src, q):
        for i, v in list(cols[src].items()):
            set_(i, dst, cols[dst].get(i, 0) + q * v)

    def drop(i, j):
        for l in list(rows[i]):
            cols[l].pop(i, None)
            if not cols[l]:
                del cols[l]
        del rows[i]
        cols.pop(j, None)

    diag = []
    # unit pivots first: clearing their column lets row and column be dropped at once
    progress = True
    while progress:
        progress = False
        for j in sorted(cols, key=lambda c: (len(cols[c]), c)):
            col = cols.get(j)
            if not col:
                continue
            units = [i for i, v in col.items() if v in (1, -1)]
            if not units:
                continue
            i = min(units, key=lambda r: (len(rows[r]), r))
            v = col[i]
            touched = [k for k in col if k != i]
            for k in touched:
                add_row(k, i, -col[k] * v)
            drop(i, j)
            for k in touched:
                if not rows[k]:
                    del rows[k]
            diag.append(1)
            progress = True
    while True:
        best = None
        for i, r in rows.items():
            for j, v in r.items():
                key = (abs(v), len(r) + len(cols[j]))
                if best is None or key < best[0]:
                    best = (key, i, j)
                    if key == (1, 2):
                        break
            if best and best[0] == (1, 2):
                break
        if best is None:
            return diag
        _, i, j = best
        while True:
            v = rows[i][j]
            moved = False
            for k, w in list(cols[j].items()):
                if k == i:
                    continue
                add_row(k, i, -(w // v))
                if cols[j].get(k):
                    i, moved = k, True
                    break
            if moved:
                continue
            v = rows[i][j]
            for l, w in list(rows[i].items()):
                if l == j:
                    continue
                add_col(l, j, -(w // v))
                if rows[i].get(l):
                    j, moved = l, True
                    break
            if not moved:
                break
        diag.append(abs(rows[i][j]))
        set_(i, j, 0)
        del rows[i]
        del cols[j]
        for r in list(rows):
            if not rows[r]:
                del rows[r]
        for c in list(cols):
            if not cols[c]:
                del cols[c]


def invariant_factors(diag) -> list:
    """Normalise a diagonal so each entry divides the next (units dropped)."""
    ds = sorted(d for d in diag if d > 1)
    changed = True
    while changed:
        changed = False
        for a in range(len(ds)):
            for b in range(a + 1, len(ds)):
                x, y = ds[a], ds[b]
                if y % x:
                    g = gcd(x, y)
                    ds[a], ds[b] = g, x * y // g
                    changed = True
        ds.sort()
    return [d for d in ds if d > 1]


@dataclass(frozen=True)
class HomologyReport:
    betti: tuple
    torsion: tuple  # per degree, invariant factors > 1
    coefficients: str = "z"
    reduced: bool = False

    def trimmed(self) -> "HomologyReport":
        """Drop trailing degrees with zero homology, so complexes of different dimension compare."""
        n = len(self.betti)
        while n > 1 and not self.betti[n - 1] and not self.torsion[n - 1]:
            n -= 1
        return HomologyReport(self.betti[:n], self.torsion[:n], self.coefficients, self.reduced)

    def to_json(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion],
                "coefficients": self.coefficients, "reduced": self.reduced}


def homology(k: SimplicialComplex, coefficients: str = "z", reduced: bool = False) -> HomologyReport:
    if coefficients not in ("z", "q", "z2"):
        raise ValueError(f"unknown coefficients {coefficients!r}")
    top = k.dimension
    size = [len(k.by_dim(d)) for d in range(top + 2)]
    diags = [[] for _ in range(top + 2)]  # diags[d]: boundary C_d -> C_{d-1}
    for d in range(1, top + 1):
        diags[d] = smith_diagonal(boundary_entries(k, d)[0])

    def rank(d):
        if d <= 0 or d > top:
            return 0
        if coefficients == "z2":
            return sum(x % 2 for x in diags[d])
        return len(diags[d])

    betti, torsion = [], []
    for d in range(top + 1):
        betti.append(size[d] - rank(d) - rank(d + 1))
        t = invariant_factors(diags[d + 1]) if coefficients == "z" and d + 1 <= top else []
        torsion.append(tuple(t))
    if reduced and betti and size[0]:
        betti[0] -= 1
    return HomologyReport(tuple(betti), tuple(torsion), coefficients, reduced)


def rational_betti(k: SimplicialComplex) -> tuple:
    """Betti numbers from exact rational ranks (an independent check of SNF)."""
    from sympy import zeros

    top = k.dimension
    ranks = [0] * (top + 2)
    for d in range(1, top + 1):
        ent, nr, nc = boundary_entries(k, d)
        m = zeros(nr, nc)
        for (i, j), v in ent.items():
            m[i, j] = v
        ranks[d] = m.rank()
    return tuple(len(k.by_dim(d)) - ranks[d] - ranks[d + 1] for d in range(top + 1))


def sphere_report(h: HomologyReport, n: int) -> bool:
    """Homology evidence only: True iff H_* looks like that of the n-sphere."""
    b = list(h.betti)
    if h.reduced:
        b[0] += 1
    want = [1] + [0] * (n - 1) + [1] if n > 0 else [2]
    b = b + [0] * max(0, len(want) - len(b))
    if b[len(want):] and any(b[len(want):]):
        return False
    return b[:len(want)] == want and not any(h.torsion)
