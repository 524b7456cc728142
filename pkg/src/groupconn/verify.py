"""End-to-end verification of the separating constructions.

Items run in dependency order: the direct H1/H2 checks, their witnesses,
the cycle law, the 2-sum tower certificates, the K4 and prism lemmas, the
two cubic constructions, and collapsibility spot checks.  Each item is
reported as pass, fail, skipped or indeterminate (budget or timeout hit);
a failure of one item never stops the run.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from groupconn.catalog import DEFAULT_CATALOG, Catalog
from groupconn.certify import (
    Replay,
    certify,
    check_certificate,
    is_collapsible,
    verify_k4_lemma,
    verify_prism_coloring,
)
from groupconn.errors import BudgetExceeded, GroupConnError, SearchTimeout
from groupconn.flow import DEFAULT_BUDGET, Deadline, edge_order_heuristic, flow_exists
from groupconn.graph import cycle, edge_connectivity
from groupconn.group import AbelianGroup
from groupconn.replicate import (
    contraction_replication,
    cycle_law_table,
    oracle_agreement,
    small_multigraphs,
    two_sum_replication,
)

MIN_BUDGET = 64 << 20

Z4 = AbelianGroup((4,))
Z22 = AbelianGroup((2, 2))


@dataclass
class RunConfig:
    memory_budget_bytes: int = DEFAULT_BUDGET
    worker_count: int = 1
    timeout_seconds: float | None = None
    output_format: str = "json"

    def __post_init__(self):
        if self.memory_budget_bytes < MIN_BUDGET:
            raise ValueError(f"memory budget must be at least {MIN_BUDGET} bytes")
        if self.worker_count < 1:
            raise ValueError("worker count must be at least 1")
        if self.timeout_seconds is not None and self.timeout_seconds <= 0:
            raise ValueError("timeout must be positive")
        if self.output_format not in ("json", "text"):
            raise ValueError("output format is json or text")

    @classmethod
    def from_env(cls, env=None, **overrides) -> RunConfig:
        """Defaults, then GROUPCONN_BUDGET_MIB / GROUPCONN_WORKERS / GROUPCONN_TIMEOUT, then overrides."""
        env = os.environ if env is None else env
        kw = {}
        if env.get("GROUPCONN_BUDGET_MIB"):
            kw["memory_budget_bytes"] = int(env["GROUPCONN_BUDGET_MIB"]) << 20
        if env.get("GROUPCONN_WORKERS"):
            kw["worker_count"] = int(env["GROUPCONN_WORKERS"])
        if env.get("GROUPCONN_TIMEOUT"):
            kw["timeout_seconds"] = float(env["GROUPCONN_TIMEOUT"])
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)

    def deadline(self) -> Deadline:
        return Deadline(self.timeout_seconds)


@dataclass
class ItemResult:
    id: str
    claim: str
    status: str = "pass"  # pass | fail | skipped | indeterminate
    details: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    def to_dict(self) -> dict:
        return {"id": self.id, "claim": self.claim, "status": self.status,
                "details": self.details, "elapsed_ms": self.elapsed_ms}


class _Item:
    """Context for one item: times it and turns exceptions into a status."""

    def __init__(self, report: list, id: str, claim: str, progress):
        self.res = ItemResult(id, claim)
        self.report = report
        self.progress = progress

    def __enter__(self):
        self.start = time.monotonic()
        if self.progress:
            self.progress(f"[{self.res.id}] {self.res.claim}")
        return self.res

    def __exit__(self, exc_type, exc, tb):
        self.res.elapsed_ms = int((time.monotonic() - self.start) * 1000)
        if exc is not None:
            if isinstance(exc, (BudgetExceeded, SearchTimeout)):
                self.res.status = "indeterminate"
            elif isinstance(exc, (GroupConnError, ValueError, KeyError, AssertionError)):
                self.res.status = "fail"
            else:
                return False
            self.res.details["error"] = f"{type(exc).__name__}: {exc}"
        if self.progress:
            self.progress(f"[{self.res.id}] {self.res.status} ({self.res.elapsed_ms} ms)")
        self.report.append(self.res)
        return True


def _expect(res: ItemResult, ok: bool):
    if not ok and res.status == "pass":
        res.status = "fail"


def run_verify_paper(config: RunConfig | None = None, quick: bool = False,
                     catalog: Catalog | None = None, replications: bool = False,
                     progress=None) -> tuple[int, dict]:
    """Run every item; returns (exit status, report).

    Exit status is 0 when every non-skipped item passes, 1 when an item
    fails, and 3 when the only problems are budget or timeout limits.
    """
    config = config or RunConfig()
    catalog = catalog or DEFAULT_CATALOG
    rp = Replay(catalog, config.memory_budget_bytes, config.worker_count, config.deadline())
    items: list[ItemResult] = []

    def item(id, claim):
        rp.deadline = config.deadline()
        return _Item(items, id, claim, progress)

    def fmt(grp, beta):
        return [grp.format_element(b) for b in beta]

    with item("direct", "H1 is Z2xZ2- but not Z4-connected; H2 is Z4- but not Z2xZ2-connected") as res:
        for name, grp, want in (("H1", Z22, True), ("H1", Z4, False), ("H2", Z4, True), ("H2", Z22, False)):
            t = time.monotonic()
            v = rp.verdict(catalog.graph(name), grp)
            res.details[f"{name}/{grp}"] = {
                "connected": v.connected, "failed_count": v.failed_count,
                "witness": None if v.witness is None else fmt(grp, v.witness),
                "elapsed_ms": int((time.monotonic() - t) * 1000),
            }
            _expect(res, v.connected == want)

    with item("witnesses", "the reported failed boundaries have no nowhere-zero preimage (tree search)") as res:
        for name, grp in (("H1", Z4), ("H2", Z22)):
            v = rp.verdict(catalog.graph(name), grp)
            if v.witness is None:
                raise AssertionError(f"{name} over {grp} has no witness")
            found = flow_exists(catalog.graph(name), grp, v.witness, "tree", deadline=rp.deadline)
            res.details[f"{name}/{grp}"] = {"flow_found": found}
            _expect(res, not found)

    with item("cycle_law", "C_n is S-connected iff |S| >= n + 1") as res:
        groups = [AbelianGroup(f) for f in ((3,), (4,), (2, 2), (5,), (6,), (2, 3))]
        rows = cycle_law_table((2, 3, 4, 5), groups)
        bad = [(r.n, r.group) for r in rows if r.connected != r.predicted]
        res.details = {"cases": len(rows), "mismatches": bad}
        _expect(res, not bad)

    for name, conn_group in (("H1_2", Z22), ("H2_2", Z4), ("H1_3", Z22), ("H2_3", Z4)):
        other = Z4 if conn_group == Z22 else Z22
        with item(f"certificate_{name}", f"{name} is {conn_group}-connected but not {other}-connected") as res:
            for grp, want in ((conn_group, True), (other, False)):
                cert = certify(name, grp, rp)
                chk = check_certificate(cert, rp)
                res.details[str(grp)] = {"rule": cert.rule, "connected": cert.conclusion.connected,
                                         "nodes": cert.size(), "replay_ok": chk.ok, "reason": chk.reason}
                _expect(res, chk.ok and cert.conclusion.connected == want)
            if name.endswith("_3"):
                lam = edge_connectivity(catalog.graph(name))
                res.details["edge_connectivity"] = lam
                _expect(res, lam == 3)

    with item("k4_lemma", "K4 flows with boundary 1 have a vertex with every edge contributing -1") as res:
        rep = verify_k4_lemma(catalog)
        res.details = rep
        _expect(res, rep["property_holds"] and rep["flows_checked"] > 0 and rep["figure_flow_seen"])

    with item("prism_lemma", "the 3-prism is uniquely 3-edge-colourable") as res:
        rep = verify_prism_coloring(catalog=catalog)
        res.details = rep
        _expect(res, rep["unique_partition"] and rep["coloring_count"] == 6)

    for name, pos, neg in (("cubicZ22notZ4", Z22, Z4), ("cubicZ4notZ22", Z4, Z22)):
        with item(f"{name}_structure", f"{name} is cubic, 3-edge-connected and {pos}-connected") as res:
            g = catalog.graph(name)
            lam = edge_connectivity(g)
            cert = certify(name, pos, rp)
            chk = check_certificate(cert, rp)
            res.details = {"n": g.n, "m": g.m, "cubic": g.is_cubic(), "edge_connectivity": lam,
                           "certificate_nodes": cert.size(), "replay_ok": chk.ok, "reason": chk.reason}
            _expect(res, g.is_cubic() and lam == 3 and chk.ok and cert.conclusion.connected)
        with item(f"{name}_negative", f"{name} is not {neg}-connected (single transferred boundary)") as res:
            if quick:
                res.status = "skipped"
            else:
                g = catalog.graph(name)
                _, width = edge_order_heuristic(g)
                cert = certify(name, neg, rp)
                chk = check_certificate(cert, rp)
                stats = rp.frontier_stats[-1]
                res.details = {"frontier_width": width, "peak_axes": stats.peak_axes,
                               "peak_cells": stats.peak_cells, "search_s": round(stats.elapsed_s, 3),
                               "replay_ok": chk.ok, "reason": chk.reason,
                               "beta": cert.data.get("beta")}
                _expect(res, chk.ok and not cert.conclusion.connected)

    with item("collapsible", "C3 and K4 are collapsible, C4 is not; collapsible small graphs are Z4- and Z2xZ2-connected") as res:
        spot = {"C3": is_collapsible(cycle(3)), "K4": is_collapsible(catalog.graph("K4")),
                "C4": is_collapsible(cycle(4))}
        bad = []
        count = 0
        for g in small_multigraphs(4, 6):
            if is_collapsible(g):
                count += 1
                for grp in (Z4, Z22):
                    if not rp.verdict(g, grp).connected:
                        bad.append((g.edges, str(grp)))
        res.details = {"spot": spot, "collapsible_in_corpus": count, "violations": bad}
        _expect(res, spot == {"C3": True, "K4": True, "C4": False} and not bad)

    if replications:
        groups34 = [AbelianGroup((3,)), Z4, Z22]
        with item("two_sum_lemma", "2-sums of two non-S-connected graphs are not S-connected") as res:
            rep = two_sum_replication(groups34)
            res.details = {"pairs": rep.pairs, "sums": rep.sums, "counterexamples": len(rep.counterexamples)}
            _expect(res, rep.pairs >= 200 and not rep.counterexamples)
        with item("contraction_lemma", "with H S-connected, G is S-connected iff G/H is") as res:
            rep = contraction_replication(groups34)
            res.details = {"instances": rep.instances, "mismatches": len(rep.mismatches)}
            _expect(res, rep.instances >= 100 and not rep.mismatches)
        with item("oracle_agreement", "tree, frontier and bitset engines agree") as res:
            groups = [AbelianGroup((2,)), AbelianGroup((3,)), Z4, Z22]
            rep = oracle_agreement(small_multigraphs(5, 8), groups)
            res.details = {"graphs": rep.graphs, "queries": rep.queries,
                           "disagreements": len(rep.disagreements)}
            _expect(res, not rep.disagreements)

    statuses = [r.status for r in items]
    if "fail" in statuses:
        code = 1
    elif "indeterminate" in statuses:
        code = 3
    else:
        code = 0
    report = {
        "status": {0: "pass", 1: "fail", 3: "indeterminate"}[code],
        "quick": quick,
        "config": {"memory_budget_bytes": config.memory_budget_bytes,
                   "worker_count": config.worker_count,
                   "timeout_seconds": config.timeout_seconds},
        "items": [r.to_dict() for r in items],
    }
    return code, report
