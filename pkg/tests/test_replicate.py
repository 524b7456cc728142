import itertools

from groupconn.connectivity import is_group_connected
from groupconn.flow import has_nowhere_zero_flow
from groupconn.graph import Multigraph, proper_edge_colorings, triangle_expand
from groupconn.replicate import (
    contraction_replication,
    cycle_law_table,
    oracle_agreement,
    small_multigraphs,
    two_sum_replication,
)

from conftest import Z3, Z4, Z22
from test_graph import K4


def test_corpus_counts():
    # connected loopless multigraphs up to isomorphism, by vertex count
    counts = {}
    for g in small_multigraphs(4, 5):
        counts[(g.n, g.m)] = counts.get((g.n, g.m), 0) + 1
    assert counts[(4, 3)] == 2  # the path and the star
    assert counts[(3, 3)] == 2  # triangle, and a digon with a pendant edge
    assert counts[(2, 5)] == 1
    assert counts[(1, 0)] == 1


def test_corpus_has_no_isomorphic_duplicates():
    seen = set()
    for g in small_multigraphs(4, 5):
        forms = set()
        for p in itertools.permutations(range(g.n)):
            forms.add((g.n, tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in g.edges))))
        assert not forms & seen
        seen |= forms


def test_cycle_law_table():
    rows = cycle_law_table((2, 3), [Z3, Z4])
    assert all(r.connected == r.predicted for r in rows)


def test_oracle_agreement_small():
    rep = oracle_agreement(small_multigraphs(4, 5), [Z3, Z22])
    assert rep.queries > 0 and not rep.disagreements


def test_two_sum_replication_small():
    rep = two_sum_replication([Z3, Z4], pairs_per_group=10, max_n=4, max_m=5)
    assert rep.pairs == 20 and rep.sums > 0
    assert not rep.counterexamples


def test_contraction_replication_small():
    rep = contraction_replication([Z3, Z4, Z22], instances=30, seed=7)
    assert rep.instances == 30 and not rep.mismatches


def _small_cubic_graphs():
    k33 = Multigraph(6, tuple((a, b) for a in range(3) for b in range(3, 6)))
    prism = triangle_expand(K4, 0)
    theta = Multigraph(2, ((0, 1),) * 3)
    return [theta, K4, k33, prism]


def test_triangle_expansion_preserves_verdict():
    for g in _small_cubic_graphs():
        for grp in (Z4, Z22):
            base = is_group_connected(g, grp).connected
            for v in (0, g.n - 1):
                assert is_group_connected(triangle_expand(g, v), grp).connected == base


def test_cubic_z22_flow_iff_three_edge_colouring():
    graphs = _small_cubic_graphs()
    graphs.append(Multigraph(10, (  # Petersen graph
        (0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
        (5, 7), (7, 9), (9, 6), (6, 8), (8, 5))))
    for g in graphs:
        colourable = next(proper_edge_colorings(g, 3), None) is not None
        assert has_nowhere_zero_flow(g, Z22) == colourable
    assert not has_nowhere_zero_flow(graphs[-1], Z22)


def test_collapsible_graphs_are_connected_for_both_groups():
    from groupconn.certify import is_collapsible

    for g in small_multigraphs(4, 6):
        if is_collapsible(g):
            assert is_group_connected(g, Z4).connected
            assert is_group_connected(g, Z22).connected
