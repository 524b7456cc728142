import itertools

import pytest

from groupconn.catalog import (
    NAMES,
    Catalog,
    attach_color_triples,
    build_prism_boundary,
    build_theorem8_boundary,
    catalog_get,
)
from groupconn.graph import edge_connectivity, enumerate_edge_cuts, format_graph, subgraph

from conftest import Z4, Z22


def test_names_resolve(catalog):
    for name in NAMES:
        e = catalog.get(name)
        assert e.graph.name == name
    with pytest.raises(KeyError):
        catalog_get("H9")


@pytest.mark.parametrize("name", ["H1", "H2"])
def test_gadget_shape(catalog, name):
    e = catalog.get(name)
    g = e.graph
    assert (g.n, g.m) == (15, 21)
    assert g.vertices_of_degree(2) == [0, 1, 13]
    assert [e.marked[k] for k in "xyz"] == [0, 1, 13]
    assert edge_connectivity(g) == 2
    cuts = enumerate_edge_cuts(g, 2)
    assert len(cuts) == 3
    # the three 2-edge-cuts are the trivial ones around the 2-vertices
    assert sorted(next(iter(c.side)) for c in cuts if len(c.side) == 1) == [0, 1, 13]


def test_gadgets_differ(catalog):
    assert set(catalog.graph("H1").edges) != set(catalog.graph("H2").edges)


def test_first_two_sum_counts(catalog):
    g = catalog.graph("H1_1")
    assert (g.n, g.m) == (17, 24)


@pytest.mark.parametrize("name", ["H1_2", "H2_2"])
def test_second_two_sum(catalog, name):
    e = catalog.get(name)
    g = e.graph
    z, z2 = e.marked["z"], e.marked["z'"]
    assert g.vertices_of_degree(2) == sorted([z, z2])
    cuts = enumerate_edge_cuts(g, 2)
    assert len(cuts) == 3
    for c in cuts:
        assert (z in c.side) != (z2 in c.side)


@pytest.mark.parametrize("name", ["H1_3", "H2_3"])
def test_third_construction(catalog, name):
    g = catalog.graph(name)
    assert edge_connectivity(g) == 3
    assert (g.n, g.m) == (4 + 3 * 28, 4 + 3 * 43)


@pytest.mark.parametrize("name,host_n,host_m,copies", [
    ("cubicZ22notZ4", 4, 6, 4),
    ("cubicZ4notZ22", 6, 9, 6),
])
def test_cubic_constructions(catalog, name, host_n, host_m, copies):
    e = catalog.get(name)
    g = e.graph
    assert (g.n, g.m) == (15 * copies, 21 * copies + host_m)
    assert g.is_cubic()
    assert edge_connectivity(g) == 3
    assert len(e.parts) == copies


@pytest.mark.parametrize("name", ["H1_2", "H2_2", "H1_3", "cubicZ22notZ4", "cubicZ4notZ22"])
def test_parts_are_copies_of_their_source(catalog, name):
    e = catalog.get(name)
    for p in e.parts:
        h, _ = subgraph(e.graph, p.edges, p.vertices)
        assert h == catalog.graph(p.source)


def test_prism_copies_realise_all_permutations(catalog):
    e = catalog.get("cubicZ4notZ22")
    triples = attach_color_triples(e)
    assert sorted(triples) == sorted(itertools.permutations(range(3)))


def test_prism_coloring_is_proper(catalog):
    prism = catalog.graph("prism")
    colors = catalog.prism_coloring()
    for v in range(prism.n):
        assert len({colors[e] for e in prism.incidence[v]}) == 3


def test_transferred_boundaries_are_zero_sum(replay, catalog):
    beta1 = replay.verdict(catalog.graph("H1"), Z4).witness
    beta = build_theorem8_boundary(beta1)
    assert len(beta) == 60 and Z4.sum(beta) == Z4.zero
    beta1 = replay.verdict(catalog.graph("H2"), Z22).witness
    beta = build_prism_boundary(beta1)
    assert len(beta) == 90 and Z22.sum(beta) == Z22.zero


def test_transfer_rejects_bad_input():
    with pytest.raises(ValueError):
        build_theorem8_boundary(((1,),) + ((0,),) * 14)
    with pytest.raises(ValueError):
        build_theorem8_boundary(((0,),) * 3)


def test_emission_is_byte_stable():
    a = format_graph(Catalog().graph("H1_3"))
    b = format_graph(Catalog().graph("H1_3"))
    assert a == b
    assert "label z1 " in a


def test_override_replaces_gadget(catalog):
    h1 = catalog.graph("H1")
    swapped = h1.__class__(h1.n, h1.edges[::-1])
    cat = Catalog({"H1": swapped})
    assert cat.graph("H1").edges == swapped.edges
    assert cat.graph("H1_1").m == 24
