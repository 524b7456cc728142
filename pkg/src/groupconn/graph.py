"""Loopless multigraphs with a reference orientation, and the operations used
to build the counterexample constructions.

Edge identity is positional: ``g.edges[i]`` is the ``(tail, head)`` pair of
edge ``i``.  Every transformation documents the vertex and edge order of its
output so that edge indices can be tracked through a construction.
"""

from __future__ import annotations

import hashlib
import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

Edge = tuple[int, int]


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[Edge, ...]
    name: str = field(default="", compare=False)
    labels: tuple[tuple[str, int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        for i, (t, h) in enumerate(edges):
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise ValueError(f"edge {i} = ({t}, {h}) references a vertex outside 0..{self.n - 1}")
            if t == h:
                raise ValueError(f"edge {i} is a loop at vertex {t}")
        object.__setattr__(self, "edges", edges)
        labels = tuple((str(k), int(v)) for k, v in self.labels)
        for k, v in labels:
            if not 0 <= v < self.n:
                raise ValueError(f"label {k} points at missing vertex {v}")
        object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices at each vertex, in edge-list order."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (t, h) in enumerate(self.edges):
            inc[t].append(i)
            inc[h].append(i)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def degrees(self) -> list[int]:
        return [len(x) for x in self.incidence]

    def vertices_of_degree(self, d: int) -> list[int]:
        return [v for v in range(self.n) if self.degree(v) == d]

    def is_cubic(self) -> bool:
        return self.n > 0 and all(d == 3 for d in self.degrees())

    def label_map(self) -> dict[str, int]:
        return dict(self.labels)

    def with_meta(self, name: str | None = None, labels=None) -> Multigraph:
        return Multigraph(
            self.n,
            self.edges,
            self.name if name is None else name,
            self.labels if labels is None else tuple(labels.items() if isinstance(labels, dict) else labels),
        )

    def components(self, skip: frozenset[int] | set[int] = frozenset()) -> list[list[int]]:
        """Connected components (sorted vertex lists), ignoring edges in ``skip``."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, (t, h) in enumerate(self.edges):
            if i in skip:
                continue
            rt, rh = find(t), find(h)
            if rt != rh:
                parent[max(rt, rh)] = min(rt, rh)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def digest(self) -> str:
        """SHA-256 of the structure (vertex count and ordered edge list)."""
        text = format_graph(Multigraph(self.n, self.edges))
        return hashlib.sha256(text.encode()).hexdigest()


# --- file format -------------------------------------------------------------


def parse_graph(text: str) -> Multigraph:
    """Read the line format: ``name``, ``vertices``, ``edge t h`` and ``label name v``."""
    name = ""
    n = None
    edges: list[Edge] = []
    labels: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "name":
                name = rest
            elif key == "vertices":
                if n is not None:
                    raise ValueError("duplicate vertices line")
                n = int(rest)
            elif key == "edge":
                if n is None:
                    raise ValueError("edge before vertices line")
                parts = rest.split()
                if len(parts) != 2:
                    raise ValueError("edge needs exactly two endpoints")
                t, h = int(parts[0]), int(parts[1])
                if t == h:
                    raise ValueError(f"loop at vertex {t}")
                if not (0 <= t < n and 0 <= h < n):
                    raise ValueError(f"endpoint out of range for {n} vertices")
                edges.append((t, h))
            elif key == "label":
                parts = rest.split()
                if len(parts) != 2:
                    raise ValueError("label needs a name and a vertex")
                labels.append((parts[0], int(parts[1])))
            else:
                raise ValueError(f"unknown keyword {key!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None:
        raise ValueError("missing vertices line")
    return Multigraph(n, tuple(edges), name, tuple(labels))


def format_graph(g: Multigraph) -> str:
    lines = []
    if g.name:
        lines.append(f"name {g.name}")
    lines.append(f"vertices {g.n}")
    lines.extend(f"edge {t} {h}" for t, h in g.edges)
    lines.extend(f"label {k} {v}" for k, v in g.labels)
    return "\n".join(lines) + "\n"


# --- small constructors ---------------------------------------------------------


def cycle(n: int) -> Multigraph:
    """C_n with edges i -> i+1 (mod n); C_2 is the digon."""
    if n < 2:
        raise ValueError("a cycle needs at least 2 vertices")
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)), f"C{n}")


def path(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, i + 1) for i in range(n - 1)), f"P{n}")


def relabel(g: Multigraph, perm) -> Multigraph:
    """Rename vertex ``v`` to ``perm[v]``; edge order is unchanged."""
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm must be a permutation of the vertices")
    return Multigraph(
        g.n,
        tuple((perm[t], perm[h]) for t, h in g.edges),
        g.name,
        tuple((k, perm[v]) for k, v in g.labels),
    )


def reverse_edges(g: Multigraph, indices) -> Multigraph:
    idx = set(indices)
    return Multigraph(
        g.n,
        tuple((h, t) if i in idx else (t, h) for i, (t, h) in enumerate(g.edges)),
        g.name,
        g.labels,
    )


def subgraph(g: Multigraph, edge_indices, vertex_order=None) -> tuple[Multigraph, list[int]]:
    """Subgraph spanned by the given edges.

    Vertices are the endpoints, renumbered in increasing old order unless
    ``vertex_order`` (new -> old) says otherwise; edges keep their relative
    order.  Returns the graph and the new -> old vertex list.
    """
    idx = sorted(set(edge_indices))
    for i in idx:
        if not 0 <= i < g.m:
            raise ValueError(f"edge index {i} out of range")
    verts = sorted({v for i in idx for v in g.edges[i]})
    if vertex_order is not None:
        vertex_order = [int(v) for v in vertex_order]
        if sorted(vertex_order) != verts:
            raise ValueError("vertex_order must list exactly the endpoints of the chosen edges")
        verts = vertex_order
    new = {v: j for j, v in enumerate(verts)}
    edges = tuple((new[g.edges[i][0]], new[g.edges[i][1]]) for i in idx)
    return Multigraph(len(verts), edges), verts


def contract(g: Multigraph, edge_indices) -> tuple[Multigraph, list[int]]:
    """Contract the given edges and delete the loops this creates.

    New vertex ids follow the smallest old vertex of each merged class.
    Surviving edges keep their order and orientation; returns the graph and
    the old -> new vertex map.
    """
    chosen = set(edge_indices)
    for i in chosen:
        if not 0 <= i < g.m:
            raise ValueError(f"edge index {i} out of range")
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in chosen:
        t, h = g.edges[i]
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[max(rt, rh)] = min(rt, rh)
    new_id: dict[int, int] = {}
    mapping = []
    for v in range(g.n):
        r = find(v)
        if r not in new_id:
            new_id[r] = len(new_id)
        mapping.append(new_id[r])
    edges = []
    for i, (t, h) in enumerate(g.edges):
        if i in chosen:
            continue
        a, b = mapping[t], mapping[h]
        if a != b:
            edges.append((a, b))
    return Multigraph(len(new_id), tuple(edges)), mapping


def contract_edge_map(g: Multigraph, edge_indices) -> list[int | None]:
    """Old -> new edge index under :func:`contract` (None for removed edges)."""
    mapping = contract(g, edge_indices)[1]
    chosen = set(edge_indices)
    out: list[int | None] = []
    nxt = 0
    for i, (t, h) in enumerate(g.edges):
        if i in chosen or mapping[t] == mapping[h]:
            out.append(None)
        else:
            out.append(nxt)
            nxt += 1
    return out


def two_sum(g1: Multigraph, e: int, g2: Multigraph, u2: int, v2: int) -> Multigraph:
    """``g1(e) + g2(u2, v2)``: delete edge ``e = (u1, v1)`` of ``g1`` and glue u1=u2, v1=v2.

    Vertices of ``g1`` keep their ids; the other vertices of ``g2`` follow in
    order.  Edges: ``g1`` without ``e``, then all of ``g2``.
    """
    if not 0 <= e < g1.m:
        raise ValueError(f"edge {e} not in g1")
    if not (0 <= u2 < g2.n and 0 <= v2 < g2.n) or u2 == v2:
        raise ValueError("u2 and v2 must be distinct vertices of g2")
    u1, v1 = g1.edges[e]
    vmap = {}
    nxt = g1.n
    for w in range(g2.n):
        if w == u2:
            vmap[w] = u1
        elif w == v2:
            vmap[w] = v1
        else:
            vmap[w] = nxt
            nxt += 1
    edges = [ed for i, ed in enumerate(g1.edges) if i != e]
    edges.extend((vmap[t], vmap[h]) for t, h in g2.edges)
    return Multigraph(nxt, tuple(edges))


def two_sum_vertex_map(g1: Multigraph, e: int, g2: Multigraph, u2: int, v2: int) -> list[int]:
    """Where each vertex of ``g2`` lands in ``two_sum(g1, e, g2, u2, v2)``."""
    u1, v1 = g1.edges[e]
    out, nxt = [], g1.n
    for w in range(g2.n):
        if w == u2:
            out.append(u1)
        elif w == v2:
            out.append(v1)
        else:
            out.append(nxt)
            nxt += 1
    return out


def triangle_expand(g: Multigraph, v: int) -> Multigraph:
    """Replace the 3-vertex ``v`` by a triangle.

    ``v`` keeps its first incident edge; the second and third move to new
    vertices ``n`` and ``n+1``.  The triangle edges ``(v,n), (n,n+1), (n+1,v)``
    are appended.
    """
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    inc = g.incidence[v]
    if len(inc) != 3:
        raise ValueError(f"vertex {v} has degree {len(inc)}, triangle expansion needs 3")
    target = {inc[1]: g.n, inc[2]: g.n + 1}
    edges = []
    for i, (t, h) in enumerate(g.edges):
        if i in target:
            t, h = (target[i], h) if t == v else (t, target[i])
        edges.append((t, h))
    edges += [(v, g.n), (g.n, g.n + 1), (g.n + 1, v)]
    return Multigraph(g.n + 2, tuple(edges))


def substitute_vertex(host: Multigraph, v: int, gadget: Multigraph, attach):
    """Replace host vertex ``v`` by a fresh copy of ``gadget``.

    The i-th edge at ``v`` (host edge-list order) is reattached to gadget
    vertex ``attach[i]``.  Host vertices other than ``v`` keep their relative
    order and come first; gadget vertices follow.  Host edges keep their index,
    gadget edges are appended.

    Returns ``(graph, host_map, gadget_map)`` where ``host_map[v]`` is None.
    """
    attach = list(attach)
    inc = host.incidence[v]
    if len(attach) != len(inc):
        raise ValueError(f"vertex {v} has degree {len(inc)} but {len(attach)} attach vertices given")
    if len(set(attach)) != len(attach):
        raise ValueError("attach vertices must be distinct")
    for a in attach:
        if not 0 <= a < gadget.n:
            raise ValueError(f"attach vertex {a} not in gadget")
    host_map: list[int | None] = []
    for w in range(host.n):
        host_map.append(None if w == v else (w if w < v else w - 1))
    base = host.n - 1
    gadget_map = [base + w for w in range(gadget.n)]
    slot = {e: gadget_map[a] for e, a in zip(inc, attach)}
    edges = []
    for i, (t, h) in enumerate(host.edges):
        t2 = slot[i] if t == v else host_map[t]
        h2 = slot[i] if h == v else host_map[h]
        edges.append((t2, h2))
    edges.extend((gadget_map[t], gadget_map[h]) for t, h in gadget.edges)
    return Multigraph(base + gadget.n, tuple(edges)), host_map, gadget_map


def proper_edge_colorings(g: Multigraph, k: int = 3):
    """Yield every proper k-edge-colouring as a tuple of colours per edge.

    Colourings come in lexicographic order of the colour tuple.
    """
    colors = [0] * g.m
    used = [set() for _ in range(g.n)]

    def rec(i):
        if i == g.m:
            yield tuple(colors)
            return
        t, h = g.edges[i]
        for c in range(k):
            if c in used[t] or c in used[h]:
                continue
            colors[i] = c
            used[t].add(c)
            used[h].add(c)
            yield from rec(i + 1)
            used[t].discard(c)
            used[h].discard(c)

    yield from rec(0)


# --- connectivity ------------------------------------------------------------------


def _max_flow(cap: list[list[int]], s: int, t: int, stop_at: int | None = None) -> int:
    n = len(cap)
    residual = [row[:] for row in cap]
    adj = [[j for j in range(n) if cap[i][j] or cap[j][i]] for i in range(n)]
    flow = 0
    while stop_at is None or flow < stop_at:
        prev = [-1] * n
        prev[s] = s
        queue = deque([s])
        while queue and prev[t] < 0:
            x = queue.popleft()
            for y in adj[x]:
                if prev[y] < 0 and residual[x][y] > 0:
                    prev[y] = x
                    queue.append(y)
        if prev[t] < 0:
            break
        bottleneck, y = None, t
        while y != s:
            x = prev[y]
            bottleneck = residual[x][y] if bottleneck is None else min(bottleneck, residual[x][y])
            y = x
        y = t
        while y != s:
            x = prev[y]
            residual[x][y] -= bottleneck
            residual[y][x] += bottleneck
            y = x
        flow += bottleneck
    return flow


def edge_connectivity(g: Multigraph) -> int:
    """Minimum number of edges whose removal disconnects ``g``.

    Computed as the minimum max-flow from vertex 0 to every other vertex.
    Disconnected graphs and graphs with fewer than two vertices give 0.
    """
    if g.n < 2 or not g.is_connected():
        return 0
    cap = [[0] * g.n for _ in range(g.n)]
    for t, h in g.edges:
        cap[t][h] += 1
        cap[h][t] += 1
    best = min(g.degrees())
    for t in range(1, g.n):
        best = min(best, _max_flow(cap, 0, t, stop_at=best))
    return best


@dataclass(frozen=True)
class EdgeCut:
    """A minimal edge cut; ``side`` is the smaller shore (ties: the one holding the lowest vertex)."""

    edges: tuple[int, ...]
    side: frozenset[int]


def bridges(g: Multigraph, skip: frozenset[int] | set[int] = frozenset()) -> list[int]:
    """Indices of cut edges of ``g`` with the ``skip`` edges removed."""
    disc = [-1] * g.n
    low = [0] * g.n
    out = []
    timer = 0
    for root in range(g.n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(g.incidence[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for e in it:
                if e == via or e in skip:
                    continue
                t, h = g.edges[e]
                w = h if t == v else t
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, e, iter(g.incidence[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] > disc[p]:
                        out.append(via)
    return sorted(out)


def enumerate_edge_cuts(g: Multigraph, k: int) -> list[EdgeCut]:
    """All inclusion-minimal edge cuts of size exactly ``k`` (1 <= k <= 4).

    A k-set is found from its (k-1) smallest edges F as a bridge of G - F with
    a larger index, then kept only if every edge of F crosses the two shores.
    """
    if not 1 <= k <= 4:
        raise ValueError("cut size must be between 1 and 4")
    if g.n < 2 or not g.is_connected():
        return []
    cuts = []
    for rest in itertools.combinations(range(g.m), k - 1):
        skip = frozenset(rest)
        if len(g.components(skip)) != 1:
            continue
        floor = rest[-1] if rest else -1
        for b in bridges(g, skip):
            if b <= floor:
                continue
            removed = skip | {b}
            comps = g.components(removed)
            where = {}
            for ci, comp in enumerate(comps):
                for v in comp:
                    where[v] = ci
            if all(where[g.edges[e][0]] != where[g.edges[e][1]] for e in rest):
                a, c = comps
                side = a if len(a) <= len(c) else c
                cuts.append(EdgeCut(tuple(sorted(removed)), frozenset(side)))
    cuts.sort(key=lambda c: c.edges)
    return cuts
