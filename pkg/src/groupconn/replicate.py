"""Exhaustive and sampled replications of the structural lemmas on small graphs.

These sweeps back the acceptance suite: the cycle law, the 2-sum lemma,
the contraction lemma and agreement of the three flow engines, each run
directly with the deciders rather than through certificates.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from groupconn.connectivity import is_group_connected
from groupconn.flow import achievable_boundaries, boundary_at, flow_exists
from groupconn.graph import Multigraph, bridges, contract, cycle, subgraph, two_sum
from groupconn.group import AbelianGroup


def _canonical(n: int, edges) -> tuple[tuple[int, int], ...]:
    best = None
    for p in itertools.permutations(range(n)):
        e = tuple(sorted((min(p[a], p[b]), max(p[a], p[b])) for a, b in edges))
        if best is None or e < best:
            best = e
    return best


@lru_cache(maxsize=None)
def _canonical_layers(n: int, max_m: int) -> tuple[frozenset, ...]:
    """Isomorphism classes of loopless multigraphs on n vertices, one layer per edge count."""
    pairs = list(itertools.combinations(range(n), 2))
    layers = [frozenset({()})]
    for _ in range(max_m):
        nxt = set()
        for edges in layers[-1]:
            for p in pairs:
                nxt.add(_canonical(n, edges + (p,)))
        layers.append(frozenset(nxt))
    return tuple(layers)


def small_multigraphs(max_n: int, max_m: int, connected: bool = True, min_n: int = 1) -> list[Multigraph]:
    """All loopless multigraphs up to isomorphism, ordered by (n, m, edge list).

    Edges point from the smaller to the larger vertex; S-connectivity does
    not depend on the orientation.
    """
    out = []
    for n in range(min_n, max_n + 1):
        if n == 1:
            out.append(Multigraph(1, (), "K1"))
            continue
        for m, layer in enumerate(_canonical_layers(n, max_m)):
            for edges in sorted(layer):
                g = Multigraph(n, edges)
                if connected and not g.is_connected():
                    continue
                out.append(g)
    return out


# --- cycle law ----------------------------------------------------------------------------


@dataclass
class CycleLawRow:
    n: int
    group: str
    connected: bool
    predicted: bool


def cycle_law_table(ns, groups) -> list[CycleLawRow]:
    rows = []
    for n in ns:
        for grp in groups:
            v = is_group_connected(cycle(n), grp)
            rows.append(CycleLawRow(n, str(grp), v.connected, grp.order >= n + 1))
    return rows


# --- oracle agreement -------------------------------------------------------------------------


@dataclass
class OracleReport:
    graphs: int = 0
    queries: int = 0
    disagreements: list = field(default_factory=list)


def oracle_agreement(graphs, groups, engines=("tree", "frontier", "bitset")) -> OracleReport:
    """Ask every engine about every zero-sum boundary of every graph."""
    rep = OracleReport()
    for g in graphs:
        rep.graphs += 1
        for grp in groups:
            bs = achievable_boundaries(g, grp) if "bitset" in engines else None
            for idx in range(grp.order ** max(g.n - 1, 0)):
                beta = boundary_at(grp, g.n, idx)
                answers = {}
                for algo in engines:
                    if algo == "bitset":
                        answers[algo] = bs.contains_index(idx)
                    else:
                        answers[algo] = flow_exists(g, grp, beta, algo)
                rep.queries += 1
                if len(set(answers.values())) != 1:
                    rep.disagreements.append((g, str(grp), beta, answers))
    return rep


# --- 2-sum lemma -------------------------------------------------------------------------------


@dataclass
class TwoSumReport:
    pairs: int = 0
    sums: int = 0
    counterexamples: list = field(default_factory=list)
    pairs_by_group: dict = field(default_factory=dict)


def two_sum_family(group: AbelianGroup, max_n: int = 5, max_m: int = 7) -> list[Multigraph]:
    """Connected graphs with an edge that are not S-connected, bridgeless ones first."""
    bridgeless, bridged = [], []
    for g in small_multigraphs(max_n, max_m, min_n=2):
        if is_group_connected(g, group).connected:
            continue
        (bridged if bridges(g) else bridgeless).append(g)
    return bridgeless + bridged


def _pairs_by_rank(k: int):
    # (0,0), (0,1), (1,0), (1,1), (0,2), ...: every prefix pairs the earliest graphs
    for top in range(k):
        for i in range(top):
            yield i, top
            yield top, i
        yield top, top


def two_sum_replication(groups, pairs_per_group: int = 70, max_n: int = 5, max_m: int = 7) -> TwoSumReport:
    """For pairs of non-S-connected graphs, decide every 2-sum directly.

    A pair contributes one 2-sum per edge of the first graph and ordered pair
    of distinct vertices of the second.  Pairs are taken in family order.
    """
    rep = TwoSumReport()
    for grp in groups:
        fam = two_sum_family(grp, max_n, max_m)
        count = 0
        for i, j in _pairs_by_rank(len(fam)):
            if count >= pairs_per_group:
                break
            g1, g2 = fam[i], fam[j]
            count += 1
            for e in range(g1.m):
                for u2, v2 in itertools.permutations(range(g2.n), 2):
                    s = two_sum(g1, e, g2, u2, v2)
                    rep.sums += 1
                    if is_group_connected(s, grp).connected:
                        rep.counterexamples.append((g1, e, g2, u2, v2, str(grp)))
        rep.pairs += count
        rep.pairs_by_group[str(grp)] = count
    return rep


# --- contraction lemma ------------------------------------------------------------------------


@dataclass
class ContractionReport:
    instances: int = 0
    both_connected: int = 0
    both_not: int = 0
    mismatches: list = field(default_factory=list)


def _random_connected_multigraph(rng: random.Random, n: int, m: int) -> Multigraph:
    edges = []
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        edges.append((order[rng.randrange(i)], order[i]))
    while len(edges) < m:
        a, b = rng.sample(range(n), 2)
        edges.append((a, b))
    rng.shuffle(edges)
    edges = [(a, b) if rng.random() < 0.5 else (b, a) for a, b in edges]
    return Multigraph(n, tuple(edges))


def _random_connected_edge_set(rng: random.Random, g: Multigraph, size: int) -> list[int]:
    start = rng.randrange(g.m)
    chosen = {start}
    verts = set(g.edges[start])
    while len(chosen) < size:
        cand = [e for v in verts for e in g.incidence[v] if e not in chosen]
        if not cand:
            break
        e = rng.choice(cand)
        chosen.add(e)
        verts.update(g.edges[e])
    return sorted(chosen)


def contraction_replication(groups, instances: int = 120, seed: int = 0,
                            max_attempts: int = 20000) -> ContractionReport:
    """Sample (G, H) with H an S-connected connected subgraph; compare G with G/H."""
    rng = random.Random(seed)
    rep = ContractionReport()
    attempts = 0
    while rep.instances < instances and attempts < max_attempts:
        attempts += 1
        grp = groups[attempts % len(groups)]
        n = rng.randint(3, 6)
        g = _random_connected_multigraph(rng, n, rng.randint(n, 2 * n))
        h_edges = _random_connected_edge_set(rng, g, rng.randint(2, min(5, g.m)))
        h, _ = subgraph(g, h_edges)
        if h.n < 2 or not is_group_connected(h, grp).connected:
            continue
        q, _ = contract(g, h_edges)
        vg = is_group_connected(g, grp).connected
        vq = is_group_connected(q, grp).connected
        rep.instances += 1
        if vg != vq:
            rep.mismatches.append((g, h_edges, str(grp), vg, vq))
        elif vg:
            rep.both_connected += 1
        else:
            rep.both_not += 1
    return rep
