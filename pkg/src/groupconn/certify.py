"""Replayable certificates for connectivity verdicts, plus small lemma verifiers.

A certificate is a tree of rule applications.  Every node concludes that a
graph is (or is not) S-connected; the graph is named by a *recipe*, a small
JSON object that rebuilds it from the catalog and the graph operations:

``{"catalog": "H1"}``
    a catalog graph;
``{"cycle": n}``
    the directed cycle C_n;
``{"graph": "<graph file text>"}``
    an explicit graph;
``{"subgraph": R, "edges": [...], "vertex_order": [...]}``
    the subgraph of R spanned by the edges (vertex order optional);
``{"contract": R, "edges": [...]}``
    R with the edges contracted;
``{"two_sum": R1, "edge": e, "with": R2, "u2": u, "v2": v}``
    the 2-sum of R1 at edge e with R2 at (u, v).

Each conclusion also stores the SHA-256 digest of the rebuilt graph, so
tampering with a recipe or with the catalog is caught on replay.

Rules:

Direct
    leaf; the decider is re-run on the graph.
Cycle
    leaf; the graph is a cycle of length n and the verdict is |S| >= n + 1.
Contraction
    premises (H, G/H); H is an S-connected subgraph and G inherits the
    verdict of G/H.
TwoSumNegative
    premises (G1, G2) both not S-connected, |S| >= 3; their 2-sum is not.
SingleBoundaryNegative
    leaf; a recorded boundary with no nowhere-zero preimage.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from groupconn.catalog import (
    DEFAULT_CATALOG,
    Catalog,
    build_prism_boundary,
    build_theorem8_boundary,
)
from groupconn.connectivity import ConnectivityVerdict, is_group_connected
from groupconn.errors import GroupConnError
from groupconn.flow import (
    DEFAULT_BUDGET,
    Deadline,
    FrontierStats,
    boundary_of,
    check_boundary,
    flow_with_boundary,
)
from groupconn.graph import (
    Multigraph,
    bridges,
    contract,
    contract_edge_map,
    cycle,
    format_graph,
    parse_graph,
    proper_edge_colorings,
    subgraph,
    two_sum,
)
from groupconn.group import AbelianGroup, parse_group_spec

RULES = ("Direct", "Cycle", "Contraction", "TwoSumNegative", "SingleBoundaryNegative")


class CertificateError(GroupConnError):
    """A rule was applied outside its side conditions."""


# --- tree ------------------------------------------------------------------------


@dataclass
class Conclusion:
    graph: dict
    digest: str
    group: str
    connected: bool

    def to_dict(self) -> dict:
        return {"graph": self.graph, "digest": self.digest, "group": self.group,
                "connected": self.connected}


@dataclass
class CertificateTree:
    rule: str
    conclusion: Conclusion
    premises: list[CertificateTree] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "conclusion": self.conclusion.to_dict(),
            "premises": [p.to_dict() for p in self.premises],
            "data": self.data,
        }

    def to_json(self, indent: int | None = 1) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> CertificateTree:
        c = d["conclusion"]
        return cls(
            d["rule"],
            Conclusion(c["graph"], c["digest"], c["group"], bool(c["connected"])),
            [cls.from_dict(p) for p in d.get("premises", [])],
            dict(d.get("data", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> CertificateTree:
        return cls.from_dict(json.loads(text))

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())


@dataclass
class CheckResult:
    ok: bool
    path: tuple[int, ...] = ()  # premise indices from the root to the failing node
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


# --- replay context ----------------------------------------------------------------


def _key(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class Replay:
    """Graph builds and direct verdicts, memoized across certificate nodes.

    One instance can be shared between several checks so that gadgets such
    as H1 are decided only once.
    """

    def __init__(self, catalog: Catalog | None = None, budget_bytes: int = DEFAULT_BUDGET,
                 workers: int = 1, deadline: Deadline | None = None):
        self.catalog = catalog or DEFAULT_CATALOG
        self.budget_bytes = budget_bytes
        self.workers = workers
        self.deadline = deadline or Deadline(None)
        self._graphs: dict[str, Multigraph] = {}
        self._verdicts: dict[tuple[str, str], ConnectivityVerdict] = {}
        self.frontier_stats: list[FrontierStats] = []

    def graph(self, recipe: dict) -> Multigraph:
        k = _key(recipe)
        if k not in self._graphs:
            self._graphs[k] = self._build(recipe)
        return self._graphs[k]

    def _build(self, r: dict) -> Multigraph:
        if not isinstance(r, dict):
            raise CertificateError(f"graph recipe must be an object, got {r!r}")
        if "catalog" in r:
            return self.catalog.graph(r["catalog"])
        if "cycle" in r:
            return cycle(int(r["cycle"]))
        if "graph" in r:
            return parse_graph(r["graph"])
        if "subgraph" in r:
            return subgraph(self.graph(r["subgraph"]), r["edges"], r.get("vertex_order"))[0]
        if "contract" in r:
            return contract(self.graph(r["contract"]), r["edges"])[0]
        if "two_sum" in r:
            return two_sum(self.graph(r["two_sum"]), int(r["edge"]), self.graph(r["with"]),
                           int(r["u2"]), int(r["v2"]))
        raise CertificateError(f"unknown graph recipe keys {sorted(r)}")

    def verdict(self, g: Multigraph, group: AbelianGroup) -> ConnectivityVerdict:
        k = (g.digest(), str(group))
        if k not in self._verdicts:
            self._verdicts[k] = is_group_connected(g, group, "bitset_dp", self.budget_bytes,
                                                   self.workers, self.deadline)
        return self._verdicts[k]

    def remember(self, g: Multigraph, group: AbelianGroup, verdict: ConnectivityVerdict) -> None:
        """Seed the verdict cache, e.g. with results of an earlier direct run."""
        self._verdicts[(g.digest(), str(group))] = verdict

    def conclusion(self, recipe: dict, group: AbelianGroup, connected: bool) -> Conclusion:
        return Conclusion(recipe, self.graph(recipe).digest(), str(group), bool(connected))


def graph_recipe(g: Multigraph) -> dict:
    return {"graph": format_graph(Multigraph(g.n, g.edges))}


# --- rule side conditions -----------------------------------------------------------


def _cycle_length(g: Multigraph) -> int | None:
    """n if ``g`` is a cycle on n >= 2 vertices (two parallel edges when n = 2)."""
    if g.n < 2 or g.m != g.n or not g.is_connected():
        return None
    if any(d != 2 for d in g.degrees()):
        return None
    return g.n


def _check_node(node: CertificateTree, rp: Replay) -> str | None:
    """Reason the node's own rule fails, or None.  Premises are checked separately."""
    c = node.conclusion
    try:
        group = parse_group_spec(c.group)
        g = rp.graph(c.graph)
    except (GroupConnError, ValueError, KeyError) as exc:
        return f"cannot rebuild conclusion: {exc}"
    if g.digest() != c.digest:
        return "conclusion digest does not match the rebuilt graph"
    for p in node.premises:
        if p.conclusion.group != c.group:
            return "premise group differs from the conclusion group"

    if node.rule == "Direct":
        if node.premises:
            return "Direct takes no premises"
        v = rp.verdict(g, group)
        if v.connected != c.connected:
            return f"direct check says connected={v.connected}"
        return None

    if node.rule == "Cycle":
        if node.premises:
            return "Cycle takes no premises"
        n = _cycle_length(g)
        if n is None:
            return "graph is not a cycle"
        if node.data.get("n", n) != n:
            return "recorded cycle length is wrong"
        if (group.order >= n + 1) != c.connected:
            return f"cycle law gives connected={group.order >= n + 1}"
        return None

    if node.rule == "Contraction":
        if len(node.premises) != 2:
            return "Contraction needs premises (H, G/H)"
        ph, pq = node.premises
        if not ph.conclusion.connected:
            return "H is not S-connected; the rule does not apply"
        edges = node.data.get("h_edges")
        if not edges:
            return "no contracted edge set recorded"
        try:
            h, _ = subgraph(g, edges, node.data.get("vertex_order"))
            q, _ = contract(g, edges)
        except ValueError as exc:
            return f"bad contracted edge set: {exc}"
        if not h.is_connected():
            return "H is not connected"
        if h.digest() != ph.conclusion.digest:
            return "premise H is not the subgraph on h_edges"
        if q.digest() != pq.conclusion.digest:
            return "premise quotient is not G/H"
        if pq.conclusion.connected != c.connected:
            return "verdict differs from the quotient's"
        return None

    if node.rule == "TwoSumNegative":
        if len(node.premises) != 2:
            return "TwoSumNegative needs two premises"
        if c.connected:
            return "TwoSumNegative only concludes not connected"
        if group.order < 3:
            return "the 2-sum rule needs |S| >= 3"
        p1, p2 = node.premises
        if p1.conclusion.connected or p2.conclusion.connected:
            return "a premise is S-connected"
        d = node.data
        try:
            g1, g2 = rp.graph(p1.conclusion.graph), rp.graph(p2.conclusion.graph)
            s = two_sum(g1, int(d["edge"]), g2, int(d["u2"]), int(d["v2"]))
        except (KeyError, ValueError) as exc:
            return f"bad 2-sum decomposition: {exc}"
        if s.digest() != c.digest:
            return "conclusion is not the recorded 2-sum"
        return None

    if node.rule == "SingleBoundaryNegative":
        if node.premises:
            return "SingleBoundaryNegative takes no premises"
        if c.connected:
            return "SingleBoundaryNegative only concludes not connected"
        try:
            beta = tuple(group.parse_element(s) for s in node.data["beta"])
            beta = check_boundary(g, group, beta)
        except (KeyError, ValueError) as exc:
            return f"bad boundary: {exc}"
        stats = FrontierStats([], 0, 0, 0)
        phi = flow_with_boundary(g, group, beta, "frontier", rp.budget_bytes, rp.deadline, stats=stats)
        rp.frontier_stats.append(stats)
        if phi is not None:
            return "a nowhere-zero flow realises the recorded boundary"
        return None

    return f"unknown rule {node.rule!r}"


def check_certificate(cert: CertificateTree, replay: Replay | None = None) -> CheckResult:
    """Replay every node; the result is falsy and names the failing node otherwise."""
    rp = replay or Replay()

    def walk(node: CertificateTree, path: tuple[int, ...]) -> CheckResult:
        for i, p in enumerate(node.premises):
            res = walk(p, path + (i,))
            if not res:
                return res
        reason = _check_node(node, rp)
        if reason:
            return CheckResult(False, path, f"{node.rule}: {reason}")
        return CheckResult(True)

    return walk(cert, ())


def _accept(node: CertificateTree, rp: Replay) -> CertificateTree:
    reason = _check_node(node, rp)
    if reason:
        raise CertificateError(f"{node.rule}: {reason}")
    return node


# --- rule constructors --------------------------------------------------------------


def rule_direct(recipe: dict, group: AbelianGroup, replay: Replay | None = None) -> CertificateTree:
    rp = replay or Replay()
    v = rp.verdict(rp.graph(recipe), group)
    data = {}
    if v.witness is not None:
        data["witness"] = [group.format_element(b) for b in v.witness]
    return CertificateTree("Direct", rp.conclusion(recipe, group, v.connected), [], data)


def rule_cycle(n: int, group: AbelianGroup, recipe: dict | None = None,
               replay: Replay | None = None) -> CertificateTree:
    """C_n is S-connected iff |S| >= n + 1; ``recipe`` may name any graph that is an n-cycle."""
    if n < 2:
        raise CertificateError("the cycle law needs n >= 2")
    rp = replay or Replay()
    recipe = recipe or {"cycle": n}
    node = CertificateTree("Cycle", rp.conclusion(recipe, group, group.order >= n + 1), [], {"n": n})
    return _accept(node, rp)


def rule_contraction(recipe: dict, h_edges, group: AbelianGroup, premise_h: CertificateTree,
                     premise_quotient: CertificateTree, vertex_order=None,
                     replay: Replay | None = None) -> CertificateTree:
    rp = replay or Replay()
    data = {"h_edges": sorted(int(e) for e in h_edges)}
    if vertex_order is not None:
        data["vertex_order"] = [int(v) for v in vertex_order]
    node = CertificateTree("Contraction",
                           rp.conclusion(recipe, group, premise_quotient.conclusion.connected),
                           [premise_h, premise_quotient], data)
    return _accept(node, rp)


def rule_two_sum_negative(decomp, group: AbelianGroup, premise1: CertificateTree,
                          premise2: CertificateTree, recipe: dict | None = None,
                          replay: Replay | None = None) -> CertificateTree:
    """``decomp`` is ``(edge, u2, v2)``; the graphs come from the premises."""
    rp = replay or Replay()
    e, u2, v2 = (int(x) for x in decomp)
    recipe = recipe or {"two_sum": premise1.conclusion.graph, "edge": e,
                        "with": premise2.conclusion.graph, "u2": u2, "v2": v2}
    node = CertificateTree("TwoSumNegative", rp.conclusion(recipe, group, False),
                           [premise1, premise2], {"edge": e, "u2": u2, "v2": v2})
    return _accept(node, rp)


def rule_single_boundary_negative(recipe: dict, group: AbelianGroup, beta,
                                  replay: Replay | None = None) -> CertificateTree:
    rp = replay or Replay()
    g = rp.graph(recipe)
    beta = check_boundary(g, group, beta)
    node = CertificateTree("SingleBoundaryNegative", rp.conclusion(recipe, group, False), [],
                           {"beta": [group.format_element(b) for b in beta]})
    return _accept(node, rp)


# --- certificate builders -------------------------------------------------------------


def _short_cycle(g: Multigraph, max_len: int) -> list[int] | None:
    """Edge indices of a shortest cycle with at most ``max_len`` edges, or None."""
    best = None
    # parallel edges first: a 2-cycle
    seen: dict[frozenset, int] = {}
    for i, (t, h) in enumerate(g.edges):
        k = frozenset((t, h))
        if k in seen:
            return [seen[k], i]
        seen[k] = i
    if max_len < 3:
        return None
    # shortest cycle through each edge: BFS in g - e between its ends
    for i, (t, h) in enumerate(g.edges):
        prev = {t: None}
        frontier = [t]
        while frontier and h not in prev:
            nxt = []
            for v in frontier:
                for e in g.incidence[v]:
                    if e == i:
                        continue
                    a, b = g.edges[e]
                    w = b if a == v else a
                    if w not in prev:
                        prev[w] = (v, e)
                        nxt.append(w)
            frontier = nxt
        if h not in prev:
            continue
        path = [i]
        v = h
        while prev[v] is not None:
            v, e = prev[v]
            path.append(e)
        if len(path) <= max_len and (best is None or len(path) < len(best)):
            best = path
    return best


def reduce_by_cycles(recipe: dict, group: AbelianGroup, replay: Replay | None = None) -> CertificateTree:
    """Contract short cycles (each S-connected by the cycle law) until a singleton remains.

    Falls back to a Direct leaf when no cycle of length <= |S| - 1 is left.
    """
    rp = replay or Replay()
    g = rp.graph(recipe)
    n = _cycle_length(g)
    if n is not None:
        return rule_cycle(n, group, recipe, rp)
    if g.n <= 1:
        return rule_direct(recipe, group, rp)
    cyc = _short_cycle(g, group.order - 1)
    if cyc is None:
        return rule_direct(recipe, group, rp)
    h_recipe = {"subgraph": recipe, "edges": sorted(cyc)}
    ph = rule_cycle(len(cyc), group, h_recipe, rp)
    q_recipe = {"contract": recipe, "edges": sorted(cyc)}
    pq = reduce_by_cycles(q_recipe, group, rp)
    return rule_contraction(recipe, cyc, group, ph, pq, replay=rp)


def _contract_parts(recipe: dict, parts, part_certs, group: AbelianGroup, rp: Replay,
                    finish) -> CertificateTree:
    """Contract the gadget copies one at a time, then hand the quotient to ``finish``."""
    g = rp.graph(recipe)
    if not parts:
        return finish(recipe)
    part, rest = parts[0], parts[1:]
    edge_map = contract_edge_map(g, part.edges)
    _, vmap = contract(g, part.edges)
    moved = []
    for p in rest:
        edges = tuple(edge_map[e] for e in p.edges)
        if None in edges:
            raise CertificateError("contracting one gadget copy collapsed an edge of another")
        moved.append(type(p)(p.source, edges, tuple(vmap[v] for v in p.vertices)))
    q_recipe = {"contract": recipe, "edges": sorted(part.edges)}
    pq = _contract_parts(q_recipe, moved, part_certs[1:], group, rp, finish)
    return rule_contraction(recipe, part.edges, group, part_certs[0], pq, part.vertices, rp)


def _two_sum_steps(name: str, catalog: Catalog):
    """(host recipe name, edge, gadget name, u2, v2) steps rebuilding a 2-sum tower."""
    entry = catalog.get(name)
    if name in ("H1_1", "H2_1"):
        gad = catalog.get(name[:2])
        return "C4", [(0, gad.name, gad.marked["x"], gad.marked["y"])]
    if name in ("H1_2", "H2_2"):
        gad = catalog.get(name[:2])
        h1 = catalog.get(name[:2] + "_1")
        return name[:2] + "_1", [(h1.graph.edges.index((2, 3)), gad.name, gad.marked["y"], gad.marked["x"])]
    if name in ("H1_3", "H2_3"):
        piece = catalog.get(name[:2] + "_2")
        steps = []
        host = catalog.graph("C4")
        for a, b in ((0, 1), (1, 2), (2, 3)):
            e = host.edges.index((a, b))
            steps.append((e, piece.name, piece.marked["z"], piece.marked["z'"]))
            host = two_sum(host, e, piece.graph, piece.marked["z"], piece.marked["z'"])
        return "C4", steps
    raise CertificateError(f"{entry.name} is not built by 2-sums")


def certify(name: str, group: AbelianGroup, replay: Replay | None = None) -> CertificateTree:
    """Certificate for a catalog graph, following the construction that built it.

    Cycles use the cycle law, the base gadgets H1 and H2 are Direct leaves,
    K4 and the prism are reduced by cycle contractions.  A graph made of
    gadget copies is contracted copy by copy when the gadget is S-connected.
    Otherwise 2-sum towers use the 2-sum rule and the cubic constructions use
    the transferred single boundary.
    """
    rp = replay or Replay()
    cat = rp.catalog
    entry = cat.get(name)
    recipe = {"catalog": name}
    if name.startswith("C") and name[1:].isdigit():
        return rule_cycle(int(name[1:]), group, recipe, rp)
    if name in ("K4", "prism"):
        return reduce_by_cycles(recipe, group, rp)
    if not entry.parts:
        return rule_direct(recipe, group, rp)

    part_certs = [certify(p.source, group, rp) for p in entry.parts]
    if all(c.conclusion.connected for c in part_certs):
        return _contract_parts(recipe, list(entry.parts), part_certs, group, rp,
                               lambda q: reduce_by_cycles(q, group, rp))

    if name in ("cubicZ22notZ4", "cubicZ4notZ22"):
        gadget = entry.parts[0].source
        builder = build_theorem8_boundary if name == "cubicZ22notZ4" else build_prism_boundary
        expected = "Z4" if name == "cubicZ22notZ4" else "Z2xZ2"
        if str(group) != expected:
            raise CertificateError(f"no shipped negative certificate for {name} over {group}")
        v = rp.verdict(cat.graph(gadget), group)
        beta = builder(v.witness, cat)
        return rule_single_boundary_negative(recipe, group, beta, rp)

    host_name, steps = _two_sum_steps(name, cat)
    cert = certify(host_name, group, rp)
    for i, (e, gname, u2, v2) in enumerate(steps):
        gcert = certify(gname, group, rp)
        last = i == len(steps) - 1
        cert = rule_two_sum_negative((e, u2, v2), group, cert, gcert, recipe if last else None, rp)
    return cert


# --- lemma verifiers ------------------------------------------------------------------


def verify_k4_lemma(catalog: Catalog | None = None) -> dict:
    """Every nowhere-zero Z4 flow on K4 with boundary all-ones has a vertex v at which
    every incident edge contributes 3 (= -1) to the boundary sum.

    With the identity sum 1 at every vertex this means: either all edges at v
    point into v carrying 1, or all point away carrying 3.
    """
    k4 = (catalog or DEFAULT_CATALOG).graph("K4")
    z4 = AbelianGroup((4,))
    ones = ((1,),) * 4
    checked = 0
    holds = True
    figure_flow_seen = False
    special_counts = [0] * 4
    for vals in itertools.product((1, 2, 3), repeat=6):
        phi = tuple((x,) for x in vals)
        if boundary_of(k4, z4, phi) != ones:
            continue
        checked += 1
        if vals == (1,) * 6:
            figure_flow_seen = True
        found = False
        for v in range(4):
            contrib = []
            for e in k4.incidence[v]:
                t, _ = k4.edges[e]
                contrib.append(vals[e] % 4 if t == v else (-vals[e]) % 4)
            if all(c == 3 for c in contrib):
                found = True
                special_counts[v] += 1
        holds = holds and found
    return {"property_holds": holds, "flows_checked": checked, "assignments": 3**6,
            "figure_flow_seen": figure_flow_seen, "special_vertex_counts": special_counts}


def _matching_partition(g: Multigraph, colors) -> frozenset:
    classes: dict[int, set[int]] = {}
    for e, c in enumerate(colors):
        classes.setdefault(c, set()).add(e)
    return frozenset(frozenset(s) for s in classes.values())


def verify_prism_coloring(g: Multigraph | None = None, catalog: Catalog | None = None) -> dict:
    """Brute force over all 3^m edge colourings: count the proper ones and their partitions."""
    g = g or (catalog or DEFAULT_CATALOG).graph("prism")
    count = 0
    partitions = set()
    for colors in itertools.product(range(3), repeat=g.m):
        ok = True
        for v in range(g.n):
            seen = [colors[e] for e in g.incidence[v]]
            if len(set(seen)) != len(seen):
                ok = False
                break
        if ok:
            count += 1
            partitions.add(_matching_partition(g, colors))
    # cross-check against the backtracking enumerator
    if count != sum(1 for _ in proper_edge_colorings(g, 3)):  # pragma: no cover
        raise AssertionError("colouring enumerators disagree")
    return {"coloring_count": count, "unique_partition": len(partitions) == 1,
            "partition_count": len(partitions)}


COLLAPSIBLE_MAX_EDGES = 24


def is_collapsible(g: Multigraph) -> bool:
    """For every even vertex set N, some spanning connected subgraph has odd vertices exactly N.

    Enumerates edge subsets that connect all vertices and records their odd
    sets; subsets are skipped when they cannot reach every vertex.
    """
    if g.m > COLLAPSIBLE_MAX_EDGES:
        raise GroupConnError(f"is_collapsible is brute force; {g.m} edges exceeds {COLLAPSIBLE_MAX_EDGES}")
    if g.n <= 1:
        return True
    if not g.is_connected() or bridges(g):
        # N = {} needs a spanning connected even subgraph, which cannot use a bridge
        return False
    need = 1 << (g.n - 1)  # even subsets of an n-set
    full = (1 << g.n) - 1
    ends = [(1 << t) | (1 << h) for t, h in g.edges]
    reached: set[int] = set()
    for mask in range(1 << g.m):
        # parity pruning: a spanning subgraph needs at least n - 1 edges and must touch every vertex
        if mask.bit_count() < g.n - 1:
            continue
        odd = 0
        cover = 0
        sel = []
        for e in range(g.m):
            if mask >> e & 1:
                odd ^= ends[e]
                cover |= ends[e]
                sel.append(e)
        if cover != full or odd in reached:
            continue
        if _spans(g, sel):
            reached.add(odd)
            if len(reached) == need:
                return True
    return False


def _spans(g: Multigraph, edge_ids) -> bool:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = g.n
    for e in edge_ids:
        a, b = find(g.edges[e][0]), find(g.edges[e][1])
        if a != b:
            parent[a] = b
            comps -= 1
    return comps == 1
