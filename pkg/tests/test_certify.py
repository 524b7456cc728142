import copy
import itertools
import json

import pytest

from groupconn.catalog import build_theorem8_boundary
from groupconn.certify import (
    CertificateError,
    CertificateTree,
    Replay,
    certify,
    check_certificate,
    is_collapsible,
    reduce_by_cycles,
    rule_contraction,
    rule_cycle,
    rule_direct,
    rule_single_boundary_negative,
    rule_two_sum_negative,
    verify_k4_lemma,
    verify_prism_coloring,
)
from groupconn.connectivity import is_group_connected
from groupconn.errors import GroupConnError
from groupconn.flow import boundary_of, zero_boundary
from groupconn.graph import Multigraph, cycle, two_sum
from groupconn.group import AbelianGroup

from conftest import Z2, Z3, Z4, Z22
from test_graph import K4

# frozen: nowhere-zero Z4 assignments of K4 with boundary 1 everywhere
K4_ALL_ONES_FLOWS = 12


# --- rule constructors -------------------------------------------------------------------


def test_rule_cycle_verdicts():
    assert not rule_cycle(4, Z4).conclusion.connected
    assert rule_cycle(2, Z22).conclusion.connected
    assert rule_cycle(3, Z4).conclusion.connected
    with pytest.raises(CertificateError):
        rule_cycle(1, Z4)


def test_rule_cycle_needs_a_cycle():
    with pytest.raises(CertificateError):
        rule_cycle(4, Z4, {"catalog": "K4"})


def test_k4_by_cycle_contractions(replay):
    cert = reduce_by_cycles({"catalog": "K4"}, Z22, replay)
    assert cert.conclusion.connected
    rules = [n.rule for n in cert.nodes()]
    assert rules.count("Cycle") >= 2 and "Contraction" in rules
    assert check_certificate(cert, replay)
    # the first contraction is a 3-cycle, the next a 2-cycle
    assert cert.premises[0].data["n"] == 3
    assert cert.premises[1].premises[0].data["n"] == 2


def test_contraction_rejects_unconnected_h(replay):
    c4 = {"catalog": "C4"}
    sub = {"subgraph": c4, "edges": [0, 1]}  # a path, not S-connected
    ph = rule_direct(sub, Z4, replay)
    assert not ph.conclusion.connected
    q = {"contract": c4, "edges": [0, 1]}
    pq = rule_direct(q, Z4, replay)
    with pytest.raises(CertificateError, match="not S-connected"):
        rule_contraction(c4, [0, 1], Z4, ph, pq, replay=replay)


def test_contraction_rejects_mismatched_quotient(replay):
    k4 = {"catalog": "K4"}
    tri = [0, 1, 5]  # edges 0-1, 1-2, 2-0
    ph = rule_cycle(3, Z4, {"subgraph": k4, "edges": tri}, replay)
    wrong_q = rule_direct({"contract": k4, "edges": [0]}, Z4, replay)
    with pytest.raises(CertificateError, match="quotient"):
        rule_contraction(k4, tri, Z4, ph, wrong_q, replay=replay)


def test_two_sum_negative(replay):
    c4 = rule_cycle(4, Z4, replay=replay)
    cert = rule_two_sum_negative((0, 0, 1), Z4, c4, c4, replay=replay)
    assert not cert.conclusion.connected
    g = replay.graph(cert.conclusion.graph)
    assert g == two_sum(cycle(4), 0, cycle(4), 0, 1)
    assert not is_group_connected(g, Z4).connected
    c3 = rule_cycle(3, Z4, replay=replay)
    with pytest.raises(CertificateError, match="S-connected"):
        rule_two_sum_negative((0, 0, 1), Z4, c4, c3, replay=replay)


def test_two_sum_rule_needs_three_elements(replay):
    c4 = rule_cycle(4, Z2, replay=replay)
    with pytest.raises(CertificateError, match=r"\|S\| >= 3"):
        rule_two_sum_negative((0, 0, 1), Z2, c4, c4, replay=replay)
    # a hand-built node over Z2 is rejected on replay too
    node = rule_two_sum_negative((0, 0, 1), Z3, rule_cycle(4, Z3, replay=replay),
                                 rule_cycle(4, Z3, replay=replay), replay=replay)
    d = node.to_dict()
    for n in (d, *d["premises"]):
        n["conclusion"]["group"] = "Z2"
    res = check_certificate(CertificateTree.from_dict(d), replay)
    assert not res and "|S| >= 3" in res.reason and res.path == ()


def test_single_boundary_negative(replay):
    with pytest.raises(CertificateError, match="realises"):
        rule_single_boundary_negative({"catalog": "C4"}, Z4, zero_boundary(cycle(4), Z4), replay)
    cert = rule_single_boundary_negative({"catalog": "C4"}, Z4, ((1,),) * 4, replay)
    assert not cert.conclusion.connected
    assert cert.data["beta"] == ["1"] * 4


def test_non_failed_transfer_is_rejected(replay, catalog):
    h1 = catalog.graph("H1")
    # the boundary of the all-ones assignment is achievable by construction
    beta1 = boundary_of(h1, Z4, ((1,),) * h1.m)
    beta = build_theorem8_boundary(beta1)
    with pytest.raises(CertificateError):
        rule_single_boundary_negative({"catalog": "cubicZ22notZ4"}, Z4, beta, replay)


# --- shipped certificates -----------------------------------------------------------------


@pytest.mark.parametrize("name,group,connected", [
    ("H1_2", Z22, True), ("H1_2", Z4, False),
    ("H2_2", Z4, True), ("H2_2", Z22, False),
    ("H1_3", Z22, True), ("H1_3", Z4, False),
    ("H2_3", Z4, True), ("H2_3", Z22, False),
    ("cubicZ22notZ4", Z22, True), ("cubicZ22notZ4", Z4, False),
    ("cubicZ4notZ22", Z4, True), ("cubicZ4notZ22", Z22, False),
])
def test_shipped_certificates(replay, name, group, connected):
    cert = certify(name, group, replay)
    assert cert.conclusion.connected == connected
    assert cert.conclusion.group == str(group)
    assert check_certificate(cert, replay)
    for node in cert.nodes():
        if not node.premises:
            assert node.rule in ("Direct", "Cycle", "SingleBoundaryNegative")


def test_expected_rule_shapes(replay):
    pos = certify("H1_2", Z22, replay)
    assert pos.rule == "Contraction"
    # copy of H1, then copy of H1', then the cycle C2
    assert pos.premises[0].rule == "Direct"
    assert pos.premises[1].premises[0].rule == "Direct"
    last = pos.premises[1].premises[1]
    assert last.rule == "Cycle" and last.data["n"] == 2
    neg = certify("H1_2", Z4, replay)
    assert neg.rule == "TwoSumNegative"
    assert neg.premises[0].premises[0].rule == "Cycle"
    cubic = certify("cubicZ22notZ4", Z4, replay)
    assert cubic.rule == "SingleBoundaryNegative"


def test_tampered_verdict_fails(replay):
    good = certify("H1_3", Z22, replay)
    d = good.to_dict()
    d["premises"][0]["conclusion"]["connected"] = False
    res = check_certificate(CertificateTree.from_dict(d), replay)
    assert not res
    assert res.path == (0,)


def test_tampered_recipe_fails(replay):
    good = certify("H1_2", Z4, replay)
    d = copy.deepcopy(good.to_dict())
    d["data"]["edge"] = 0
    res = check_certificate(CertificateTree.from_dict(d), replay)
    assert not res and "2-sum" in res.reason
    d = copy.deepcopy(good.to_dict())
    d["conclusion"]["digest"] = "0" * 64
    assert not check_certificate(CertificateTree.from_dict(d), replay)
    d = copy.deepcopy(good.to_dict())
    d["rule"] = "Magic"
    assert not check_certificate(CertificateTree.from_dict(d), replay)


def test_json_roundtrip_replays_from_scratch():
    rp = Replay()
    cert = certify("H2_3", Z4, rp)
    text = cert.to_json()
    assert list(json.loads(text)) == ["rule", "conclusion", "premises", "data"]
    back = CertificateTree.from_json(text)
    assert back.to_json() == text
    assert check_certificate(back, Replay())


def test_certificate_is_deterministic(replay):
    assert certify("cubicZ4notZ22", Z4, replay).to_json() == certify("cubicZ4notZ22", Z4, replay).to_json()


# --- lemma verifiers ------------------------------------------------------------------------


def test_k4_lemma():
    rep = verify_k4_lemma()
    assert rep["property_holds"]
    assert rep["assignments"] == 729
    assert rep["figure_flow_seen"]
    assert rep["flows_checked"] == K4_ALL_ONES_FLOWS


def test_k4_lemma_count_by_independent_enumeration():
    ones = ((1,),) * 4
    count = 0
    for vals in itertools.product(range(1, 4), repeat=6):
        net = [0] * 4
        for (t, h), x in zip(K4.edges, vals):
            net[t] += x
            net[h] -= x
        count += all(v % 4 == 1 for v in net)
    assert count == K4_ALL_ONES_FLOWS


def test_prism_coloring():
    rep = verify_prism_coloring()
    assert rep["coloring_count"] == 6
    assert rep["unique_partition"]
    k4 = verify_prism_coloring(K4)
    assert k4["unique_partition"] and k4["coloring_count"] == 6


def test_prism_coloring_not_unique_elsewhere():
    # the 3-cube has several non-equivalent colourings
    cube = Multigraph(8, ((0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4),
                          (0, 4), (1, 5), (2, 6), (3, 7)))
    assert not verify_prism_coloring(cube)["unique_partition"]


def _collapsible_oracle(g):
    # per even set N, look for any spanning connected subgraph with odd set N
    verts = range(g.n)
    for r in range(0, g.n + 1, 2):
        for n_set in itertools.combinations(verts, r):
            want = set(n_set)
            found = False
            for k in range(g.n - 1, g.m + 1):
                for sub in itertools.combinations(range(g.m), k):
                    deg = [0] * g.n
                    for e in sub:
                        for v in g.edges[e]:
                            deg[v] += 1
                    if {v for v in verts if deg[v] % 2} != want:
                        continue
                    h = Multigraph(g.n, tuple(g.edges[e] for e in sub))
                    if h.is_connected():
                        found = True
                        break
                if found:
                    break
            if not found:
                return False
    return True


def test_collapsible_examples():
    assert is_collapsible(cycle(3))
    assert not is_collapsible(cycle(4))
    assert is_collapsible(K4)
    for g in (cycle(2), cycle(5), Multigraph(3, ((0, 1), (1, 2), (2, 0), (0, 1)))):
        assert is_collapsible(g) == _collapsible_oracle(g)
    with pytest.raises(GroupConnError):
        is_collapsible(Multigraph(2, ((0, 1),) * 25))


def test_collapsible_matches_oracle_on_corpus():
    from groupconn.replicate import small_multigraphs

    for g in small_multigraphs(4, 5, min_n=2):
        assert is_collapsible(g) == _collapsible_oracle(g), g.edges
