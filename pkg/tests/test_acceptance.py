"""Acceptance criteria 1-11, each at its stated time (and memory) bound.

Every criterion records one PASS/FAIL line; the lines are printed as they
happen and again in the pytest terminal summary.  Criterion 12 lists the
claims that are out of reach at desk scale and is reported as excluded.

Run alone with ``pytest tests/test_acceptance.py -v`` or as a script.
"""

import time
import tracemalloc

import pytest

from groupconn.catalog import DEFAULT_CATALOG
from groupconn.certify import (
    Replay,
    certify,
    check_certificate,
    is_collapsible,
    verify_k4_lemma,
    verify_prism_coloring,
)
from groupconn.connectivity import is_group_connected
from groupconn.flow import edge_order_heuristic
from groupconn.graph import cycle, edge_connectivity
from groupconn.group import AbelianGroup
from groupconn.replicate import (
    contraction_replication,
    cycle_law_table,
    oracle_agreement,
    small_multigraphs,
    two_sum_replication,
)

Z2 = AbelianGroup((2,))
Z3 = AbelianGroup((3,))
Z4 = AbelianGroup((4,))
Z22 = AbelianGroup((2, 2))

pytestmark = pytest.mark.slow

MIB = 1 << 20
RESULTS: list[str] = []


def record(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def direct_runs():
    """Criterion 1's four whole-set runs, shared with the certificate criteria."""
    cat = DEFAULT_CATALOG
    rp = Replay(cat, budget_bytes=512 * MIB)
    runs = {}
    for name, grp in (("H1", Z22), ("H1", Z4), ("H2", Z4), ("H2", Z22)):
        g = cat.graph(name)
        tracemalloc.start()
        t = time.monotonic()
        v = is_group_connected(g, grp, budget_bytes=512 * MIB)
        elapsed = time.monotonic() - t
        peak = tracemalloc.get_traced_memory()[1]
        tracemalloc.stop()
        rp.remember(g, grp, v)
        runs[(name, str(grp))] = (v, elapsed, peak)
    return rp, runs


def test_criterion_01_gadget_verdicts(direct_runs):
    _, runs = direct_runs
    want = {("H1", "Z2xZ2"): True, ("H1", "Z4"): False, ("H2", "Z4"): True, ("H2", "Z2xZ2"): False}
    ok = True
    parts = []
    for key, conn in want.items():
        v, elapsed, peak = runs[key]
        ok &= v.connected == conn and elapsed <= 600 and peak <= 512 * MIB
        if not conn:
            ok &= v.witness is not None
        parts.append(f"{key[0]}/{key[1]}={'conn' if v.connected else f'not({v.failed_count} failed)'}"
                     f" {elapsed:.1f}s {peak / MIB:.0f}MiB")
    ok &= runs[("H1", "Z4")][0].failed_count == 16 and runs[("H2", "Z2xZ2")][0].failed_count == 96
    record(1, ok, "; ".join(parts))


def test_criterion_02_cycle_law():
    groups = [AbelianGroup(f) for f in ((3,), (4,), (2, 2), (5,), (6,), (2, 3))]
    t = time.monotonic()
    rows = cycle_law_table((2, 3, 4, 5), groups)
    elapsed = time.monotonic() - t
    bad = [(r.n, r.group) for r in rows if r.connected != r.predicted]
    record(2, not bad and elapsed <= 1.0, f"{len(rows)} cases, {len(bad)} mismatches, {elapsed:.2f}s")


def test_criterion_03_two_sum_lemma():
    t = time.monotonic()
    rep = two_sum_replication([Z3, Z4, Z22], pairs_per_group=70, max_n=5, max_m=7)
    elapsed = time.monotonic() - t
    ok = rep.pairs >= 200 and not rep.counterexamples and elapsed <= 300
    record(3, ok, f"{rep.pairs} pairs, {rep.sums} 2-sums, {len(rep.counterexamples)} counterexamples, "
                  f"{elapsed:.1f}s")


def test_criterion_04_contraction_lemma():
    t = time.monotonic()
    rep = contraction_replication([Z3, Z4, Z22], instances=120, seed=0)
    elapsed = time.monotonic() - t
    ok = rep.instances >= 100 and not rep.mismatches and elapsed <= 300
    record(4, ok, f"{rep.instances} instances ({rep.both_connected} both connected, {rep.both_not} both not), "
                  f"{len(rep.mismatches)} mismatches, {elapsed:.1f}s")


def test_criterion_05_certificates(direct_runs):
    rp, _ = direct_runs
    cat = DEFAULT_CATALOG
    t = time.monotonic()
    ok = True
    parts = []
    for name, pos, neg in (("H1_2", Z22, Z4), ("H2_2", Z4, Z22), ("H1_3", Z22, Z4), ("H2_3", Z4, Z22)):
        for grp, want in ((pos, True), (neg, False)):
            cert = certify(name, grp, rp)
            chk = check_certificate(cert, rp)
            ok &= bool(chk) and cert.conclusion.connected == want
        if name.endswith("_3"):
            lam = edge_connectivity(cat.graph(name))
            ok &= lam == 3
            parts.append(f"{name} lambda={lam}")
    elapsed = time.monotonic() - t
    ok &= elapsed <= 60
    record(5, ok, f"8 certificates replayed, {', '.join(parts)}, {elapsed:.1f}s")


def test_criterion_06_k4_lemma():
    t = time.monotonic()
    rep = verify_k4_lemma()
    elapsed = time.monotonic() - t
    ok = rep["property_holds"] and rep["flows_checked"] > 0 and rep["figure_flow_seen"] and elapsed <= 1
    record(6, ok, f"{rep['assignments']} assignments, {rep['flows_checked']} with boundary 1, {elapsed:.3f}s")


def test_criterion_07_prism_lemma():
    t = time.monotonic()
    rep = verify_prism_coloring()
    elapsed = time.monotonic() - t
    ok = rep["unique_partition"] and rep["coloring_count"] == 6 and elapsed <= 1
    record(7, ok, f"{rep['coloring_count']} colourings, unique partition={rep['unique_partition']}, "
                  f"{elapsed:.3f}s")


def _cubic_item(num, name, pos, neg, rp):
    g = DEFAULT_CATALOG.graph(name)
    lam = edge_connectivity(g)
    cert = certify(name, pos, rp)
    pos_ok = bool(check_certificate(cert, rp)) and cert.conclusion.connected
    _, width = edge_order_heuristic(g)
    t = time.monotonic()
    neg_cert = certify(name, neg, rp)
    neg_ok = bool(check_certificate(neg_cert, rp)) and not neg_cert.conclusion.connected
    elapsed = time.monotonic() - t
    ok = g.is_cubic() and lam == 3 and pos_ok and neg_ok and elapsed <= 3600
    record(num, ok, f"cubic={g.is_cubic()} lambda={lam} {pos}-connected={pos_ok} "
                    f"not {neg}-connected={neg_ok} (frontier width {width}, {elapsed:.2f}s)")


def test_criterion_08_cubic_from_k4(direct_runs):
    _cubic_item(8, "cubicZ22notZ4", Z22, Z4, direct_runs[0])


def test_criterion_09_cubic_from_prism(direct_runs):
    _cubic_item(9, "cubicZ4notZ22", Z4, Z22, direct_runs[0])


def test_criterion_10_oracle_equivalence():
    t = time.monotonic()
    rep = oracle_agreement(small_multigraphs(5, 8), [Z2, Z3, Z4, Z22])
    elapsed = time.monotonic() - t
    ok = not rep.disagreements and elapsed <= 600
    record(10, ok, f"{rep.graphs} graphs, {rep.queries} boundary queries, "
                   f"{len(rep.disagreements)} disagreements, {elapsed:.1f}s")


def test_criterion_11_collapsibility():
    t = time.monotonic()
    spot = (is_collapsible(cycle(3)), is_collapsible(DEFAULT_CATALOG.graph("K4")), is_collapsible(cycle(4)))
    count = 0
    bad = 0
    for g in small_multigraphs(5, 8):
        if is_collapsible(g):
            count += 1
            bad += not (is_group_connected(g, Z4).connected and is_group_connected(g, Z22).connected)
    elapsed = time.monotonic() - t
    ok = spot == (True, True, False) and bad == 0 and elapsed <= 300
    record(11, ok, f"C3/K4/C4 collapsible={spot}, {count} collapsible corpus graphs, {bad} violations, "
                   f"{elapsed:.1f}s")


def test_criterion_12_excluded():
    RESULTS.append("criterion 12: EXCLUDED  the count of 48 three-edge-cuts (gadget not given), "
                   "the general group-connectivity theorems and the open constant k")
    pytest.skip("documented exclusion: not reproducible at desk scale")


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q"]))
