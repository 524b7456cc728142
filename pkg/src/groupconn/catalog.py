"""Named graphs and the counterexample constructions built from H1 and H2.

H1 and H2 are transcribed from the plotted drawing: the 15 plotted points
are the vertices, and every drawn segment becomes an edge, split into two
edges wherever it passes through another plotted point.  That reading gives
each gadget exactly three 2-vertices (x, y, z in point order).

Every entry keeps *parts*: for each embedded gadget copy, the edge indices
it occupies and where each gadget vertex landed.  Certificates use parts to
name the subgraphs they contract.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from groupconn.flow import Boundary
from groupconn.graph import (
    Multigraph,
    cycle,
    proper_edge_colorings,
    substitute_vertex,
    two_sum,
    two_sum_vertex_map,
)
from groupconn.group import AbelianGroup

Point = tuple[float, float]

# plotted points, in drawing order
_H1_POINTS: tuple[Point, ...] = (
    (0, 0), (-10, 0), (-10, 10), (10, 10), (10, -10), (0, -15), (-10, -10),
    (0, 15), (15, 10), (15, -10), (0, -20), (-15, -10), (-15, 10), (-15, 0),
    (5, -12.5),
)
# segment end points, in drawing order; every curve in the drawing is straight
_H1_SEGMENTS: tuple[tuple[Point, Point], ...] = (
    ((-10, 10), (10, 10)), ((10, -10), (10, 10)), ((10, -10), (0, -15)),
    ((-10, -10), (0, -15)), ((-10, -10), (-10, 0)), ((-10, 0), (-10, 10)),
    ((0, 15), (0, 0)), ((0, 0), (5, -12.5)), ((10, 10), (15, 10)),
    ((10, -10), (15, -10)), ((0, -15), (0, -20)), ((-10, -10), (-15, -10)),
    ((-15, 10), (-10, 10)), ((0, 15), (15, 10)), ((15, 10), (15, -10)),
    ((15, -10), (0, -20)), ((0, -20), (-15, -10)), ((-15, -10), (-15, 10)),
    ((-15, 10), (0, 15)),
)
# H2 is drawn 50 to the right with one point moved from (35, 0) to (42.5, -15);
# the drawing prints (65, -10) as (615, -10)
_H2_POINTS: tuple[Point, ...] = tuple((x + 50, y) for x, y in _H1_POINTS[:13]) + ((42.5, -15), (55, -12.5))
_H2_SEGMENTS = tuple(((a[0] + 50, a[1]), (b[0] + 50, b[1])) for a, b in _H1_SEGMENTS)


def graph_from_drawing(points, segments, name: str = "") -> Multigraph:
    """Vertices are ``points``; each segment is split at the points lying strictly inside it."""
    index = {p: i for i, p in enumerate(points)}
    edges = []
    for a, b in segments:
        dx, dy = b[0] - a[0], b[1] - a[1]
        inner = []
        for p in points:
            if p == a or p == b:
                continue
            cross = dx * (p[1] - a[1]) - dy * (p[0] - a[0])
            if abs(cross) > 1e-9:
                continue
            t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)
            if 0 < t < 1:
                inner.append((t, p))
        chain = [a] + [p for _, p in sorted(inner)] + [b]
        edges.extend((index[u], index[v]) for u, v in zip(chain, chain[1:]))
    return Multigraph(len(points), tuple(edges), name)


@dataclass(frozen=True)
class Part:
    """One embedded gadget copy: its source entry, edges, and vertex placement."""

    source: str
    edges: tuple[int, ...]
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    graph: Multigraph
    marked: dict[str, int] = field(default_factory=dict)
    provenance: str = ""
    parts: tuple[Part, ...] = ()
    base: str | None = None  # host graph that the parts contract to
    coloring: tuple[int, ...] | None = None


NAMES = (
    "C2", "C3", "C4", "C5", "C6", "K4", "prism", "H1", "H2",
    "H1_1", "H2_1", "H1_2", "H2_2", "H1_3", "H2_3",
    "cubicZ22notZ4", "cubicZ4notZ22",
)

# K4 with the orientation of the drawn Z4-flow with boundary 1 (all values 1)
_K4_EDGES = ((0, 1), (1, 2), (2, 3), (0, 3), (1, 3), (2, 0))
_PRISM_EDGES = ((0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5))


def _shift_after_removal(edges, removed: int):
    return tuple(i if i < removed else i - 1 for i in edges)


def _gadget_marks(g: Multigraph) -> dict[str, int]:
    labels = g.label_map()
    if all(k in labels for k in ("x", "y", "z")):
        return {k: labels[k] for k in ("x", "y", "z")}
    twos = g.vertices_of_degree(2)
    if len(twos) != 3:
        raise ValueError(f"gadget {g.name or '?'} must have exactly three 2-vertices, found {len(twos)}")
    return dict(zip("xyz", twos))


class Catalog:
    """Builds catalog entries on demand; ``overrides`` replace base graphs such as H1."""

    def __init__(self, overrides: dict[str, Multigraph] | None = None):
        self.overrides = dict(overrides or {})
        self._cache: dict[str, CatalogEntry] = {}

    def names(self) -> tuple[str, ...]:
        return NAMES

    def get(self, name: str) -> CatalogEntry:
        if name not in NAMES:
            raise KeyError(f"unknown catalog graph {name!r}; known: {', '.join(NAMES)}")
        if name not in self._cache:
            self._cache[name] = self._build(name)
        return self._cache[name]

    def graph(self, name: str) -> Multigraph:
        return self.get(name).graph

    # --- builders -----------------------------------------------------------------

    def _build(self, name: str) -> CatalogEntry:
        if name in self.overrides and name in ("H1", "H2"):
            g = self.overrides[name]
            marks = _gadget_marks(g)
            return CatalogEntry(name, g.with_meta(name, marks), marks, "override")
        if name.startswith("C") and name[1:].isdigit():
            n = int(name[1:])
            g = cycle(n)
            marks = {f"v{i + 1}": i for i in range(n)}
            return CatalogEntry(name, g.with_meta(name, marks), marks, "cycle")
        if name == "K4":
            marks = {f"v{i + 1}": i for i in range(4)}
            return CatalogEntry(name, Multigraph(4, _K4_EDGES, "K4", tuple(marks.items())), marks,
                                "K4 oriented as the drawn flow with boundary 1")
        if name == "prism":
            return CatalogEntry(name, Multigraph(6, _PRISM_EDGES, "prism"), {}, "two triangles joined by a matching")
        if name in ("H1", "H2"):
            pts, segs = (_H1_POINTS, _H1_SEGMENTS) if name == "H1" else (_H2_POINTS, _H2_SEGMENTS)
            g = graph_from_drawing(pts, segs, name)
            marks = _gadget_marks(g)
            return CatalogEntry(name, g.with_meta(name, marks), marks, "transcribed from the plotted drawing")
        if name in ("H1_1", "H2_1"):
            return self._build_h1(name, name[:2])
        if name in ("H1_2", "H2_2"):
            return self._build_h2(name, name[:2])
        if name in ("H1_3", "H2_3"):
            return self._build_h3(name, name[:2] + "_2")
        if name == "cubicZ22notZ4":
            return self._build_k4_cubic()
        if name == "cubicZ4notZ22":
            return self._build_prism_cubic()
        raise KeyError(name)  # pragma: no cover

    def _two_sum_entry(self, host: CatalogEntry, e: int, gadget: CatalogEntry, u2: int, v2: int):
        g = two_sum(host.graph, e, gadget.graph, u2, v2)
        vmap = two_sum_vertex_map(host.graph, e, gadget.graph, u2, v2)
        parts = tuple(
            Part(p.source, _shift_after_removal(p.edges, e), p.vertices) for p in host.parts
        )
        start = host.graph.m - 1
        parts += (Part(gadget.name, tuple(range(start, start + gadget.graph.m)), tuple(vmap)),)
        return g, vmap, parts

    def _build_h1(self, name: str, gadget_name: str) -> CatalogEntry:
        c4 = self.get("C4")
        gad = self.get(gadget_name)
        # C4(v1v2) + H(x, y): edge 0 is v1 -> v2
        g, vmap, parts = self._two_sum_entry(c4, 0, gad, gad.marked["x"], gad.marked["y"])
        marks = {f"v{i + 1}": i for i in range(4)}
        marks["z"] = vmap[gad.marked["z"]]
        return CatalogEntry(name, g.with_meta(name, marks), marks, f"C4(v1v2) + {gadget_name}(x, y)",
                            parts, base="C4")

    def _build_h2(self, name: str, gadget_name: str) -> CatalogEntry:
        h1 = self.get(gadget_name + "_1")
        gad = self.get(gadget_name)
        # v3 -> v4 is edge 1 of the first 2-sum; glue v4 to x' and v3 to y'
        e = h1.graph.edges.index((2, 3))
        g, vmap, parts = self._two_sum_entry(h1, e, gad, gad.marked["y"], gad.marked["x"])
        marks = dict(h1.marked)
        marks["z'"] = vmap[gad.marked["z"]]
        return CatalogEntry(name, g.with_meta(name, marks), marks,
                            f"{gadget_name}_1(v4v3) + {gadget_name}'(x', y')", parts, base="C4")

    def _build_h3(self, name: str, piece_name: str) -> CatalogEntry:
        c4 = self.get("C4")
        piece = self.get(piece_name)
        z, z2 = piece.marked["z"], piece.marked["z'"]
        entry = CatalogEntry("C4", c4.graph, dict(c4.marked))
        marks = {f"v{i + 1}": i for i in range(4)}
        for k, (a, b) in enumerate(((0, 1), (1, 2), (2, 3)), 1):
            e = entry.graph.edges.index((a, b))
            g, vmap, parts = self._two_sum_entry(entry, e, piece, z, z2)
            marks[f"z{k}"] = vmap[z]
            marks[f"z{k}'"] = vmap[z2]
            entry = CatalogEntry(name, g, marks, "", parts)
        return CatalogEntry(name, entry.graph.with_meta(name, marks), marks,
                            f"C4 + {piece_name} on v1v2, v2v3, v3v4", entry.parts, base="C4")

    def _substitute_all(self, host: Multigraph, gadget: CatalogEntry, attach_for):
        """Replace every host vertex in index order; host edges keep their indices."""
        g = host
        parts = []
        for i in range(host.n):
            # original host vertex i is always vertex 0 of what is left of the host
            attach = attach_for(i, [host.edges[e] for e in host.incidence[i]], host.incidence[i])
            g, hmap, gmap = substitute_vertex(g, 0, gadget.graph, attach)
            parts = [Part(p.source, p.edges, tuple(hmap[v] for v in p.vertices)) for p in parts]
            start = g.m - gadget.graph.m
            parts.append(Part(gadget.name, tuple(range(start, g.m)), tuple(gmap)))
        return g, tuple(parts)

    def _build_k4_cubic(self) -> CatalogEntry:
        k4 = self.get("K4").graph
        gad = self.get("H1")
        xyz = [gad.marked[k] for k in "xyz"]
        g, parts = self._substitute_all(k4, gad, lambda i, edges, inc: xyz)
        marks = {}
        for i, p in enumerate(parts, 1):
            for k in "xyz":
                marks[f"{k}{i}"] = p.vertices[gad.marked[k]]
        return CatalogEntry("cubicZ22notZ4", g.with_meta("cubicZ22notZ4", marks), marks,
                            "every K4 vertex replaced by a copy of H1", parts, base="K4")

    def prism_coloring(self) -> tuple[int, ...]:
        """Lexicographically first proper 3-edge-colouring of the prism."""
        return next(proper_edge_colorings(self.get("prism").graph, 3))

    def _build_prism_cubic(self) -> CatalogEntry:
        prism = self.get("prism").graph
        gad = self.get("H2")
        colors = self.prism_coloring()
        perms = list(itertools.permutations(range(3)))

        def attach_for(i, edges, inc):
            # copy i gets permutation i: x on colour p, y on colour q, z on colour r
            role = {c: k for k, c in zip("xyz", perms[i])}
            return [gad.marked[role[colors[e]]] for e in inc]

        g, parts = self._substitute_all(prism, gad, attach_for)
        marks = {}
        for i, p in enumerate(parts, 1):
            for k in "xyz":
                marks[f"{k}{i}"] = p.vertices[gad.marked[k]]
        return CatalogEntry("cubicZ4notZ22", g.with_meta("cubicZ4notZ22", marks), marks,
                            "every prism vertex replaced by a copy of H2, colour triples over all permutations",
                            parts, base="prism", coloring=colors)


DEFAULT_CATALOG = Catalog()


def catalog_get(name: str, catalog: Catalog | None = None) -> CatalogEntry:
    return (catalog or DEFAULT_CATALOG).get(name)


def attach_color_triples(entry: CatalogEntry, catalog: Catalog | None = None) -> list[tuple[int, int, int]]:
    """Colour of the host edge at x, y, z for each copy of the prism construction."""
    catalog = catalog or DEFAULT_CATALOG
    g = entry.graph
    out = []
    for i in range(len(entry.parts)):
        triple = []
        for k in "xyz":
            v = entry.marked[f"{k}{i + 1}"]
            host_edges = [e for e in g.incidence[v] if e < 9]
            (e,) = host_edges
            triple.append(entry.coloring[e])
        out.append(tuple(triple))
    return out


def _gadget_boundary(group: AbelianGroup, entry: CatalogEntry, gadget: CatalogEntry, beta1, offsets):
    beta1 = tuple(group.check(b) for b in beta1)
    if len(beta1) != gadget.graph.n:
        raise ValueError(f"beta1 has {len(beta1)} values, {gadget.name} has {gadget.graph.n} vertices")
    if group.sum(beta1) != group.zero:
        raise ValueError("beta1 is not zero-sum")
    vals = [group.zero] * entry.graph.n
    for p in entry.parts:
        for w, v in enumerate(p.vertices):
            vals[v] = beta1[w]
        for k, off in offsets.items():
            v = p.vertices[gadget.marked[k]]
            vals[v] = group.sub(vals[v], off)
    beta = tuple(vals)
    if group.sum(beta) != group.zero:  # pragma: no cover - guaranteed by the construction
        raise AssertionError("assembled boundary is not zero-sum")
    return beta


def build_theorem8_boundary(beta1, catalog: Catalog | None = None) -> Boundary:
    """Boundary on cubicZ22notZ4 over Z4: beta1 on each H1 copy, minus 1 at x, y, z."""
    catalog = catalog or DEFAULT_CATALOG
    z4 = AbelianGroup((4,))
    return _gadget_boundary(z4, catalog.get("cubicZ22notZ4"), catalog.get("H1"), beta1,
                            {"x": (1,), "y": (1,), "z": (1,)})


def build_prism_boundary(beta1, catalog: Catalog | None = None) -> Boundary:
    """Boundary on cubicZ4notZ22 over Z2xZ2: beta1 on each H2 copy, shifted at x, y, z."""
    catalog = catalog or DEFAULT_CATALOG
    z22 = AbelianGroup((2, 2))
    return _gadget_boundary(z22, catalog.get("cubicZ4notZ22"), catalog.get("H2"), beta1,
                            {"x": (0, 1), "y": (1, 0), "z": (1, 1)})
