"""Command-line interface: ``groupconn <command> ...``.

Exit codes: 0 the checked claim holds, 1 it does not, 2 usage error,
3 resource limit (memory budget or timeout; the answer is indeterminate).
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from groupconn.catalog import DEFAULT_CATALOG, Catalog
from groupconn.certify import CertificateTree, Replay, certify, check_certificate, is_collapsible
from groupconn.connectivity import failed_boundaries, is_group_connected
from groupconn.errors import BudgetExceeded, GroupConnError, SearchTimeout
from groupconn.flow import (
    FrontierStats,
    edge_order_heuristic,
    flow_exists,
    flow_with_boundary,
    parse_boundary,
    zero_boundary,
)
from groupconn.graph import (
    Multigraph,
    edge_connectivity,
    enumerate_edge_cuts,
    format_graph,
    parse_graph,
    substitute_vertex,
    triangle_expand,
    two_sum,
)
from groupconn.group import AbelianGroup, parse_group_spec
from groupconn.verify import RunConfig, run_verify_paper

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


# --- argument helpers -----------------------------------------------------------------


def load_graph(ref: str, catalog: Catalog | None = None) -> Multigraph:
    """A graph file path, or a catalog name such as ``H1``."""
    catalog = catalog or DEFAULT_CATALOG
    path = Path(ref)
    if path.is_file():
        try:
            g = parse_graph(path.read_text())
        except ValueError as exc:
            raise click.BadParameter(f"{ref}: {exc}") from None
        return g if g.name else g.with_meta(path.stem)
    if ref in catalog.names():
        return catalog.graph(ref)
    raise click.BadParameter(f"{ref!r} is neither a file nor a catalog name")


class GraphParam(click.ParamType):
    name = "graph"

    def convert(self, value, param, ctx):
        if isinstance(value, Multigraph):
            return value
        catalog = (ctx.obj or {}).get("catalog") if ctx else None
        try:
            return load_graph(value, catalog)
        except click.BadParameter as exc:
            self.fail(exc.message, param, ctx)


class GroupParam(click.ParamType):
    name = "group"

    def convert(self, value, param, ctx):
        if isinstance(value, AbelianGroup):
            return value
        try:
            return parse_group_spec(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


GRAPH = GraphParam()
GROUP = GroupParam()


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from None


def _emit(ctx, payload: dict) -> None:
    cfg: RunConfig = ctx.obj["config"]
    if cfg.output_format == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        for k, v in payload.items():
            if isinstance(v, (list, dict)):
                v = json.dumps(v)
            click.echo(f"{k}: {v}")


def _progress(msg: str) -> None:
    click.echo(msg, err=True)


def _limited(fn):
    """Run ``fn``; resource limits become exit 3 with an indeterminate report."""
    try:
        return fn()
    except (BudgetExceeded, SearchTimeout) as exc:
        click.echo(json.dumps({"status": "indeterminate", "reason": str(exc)}))
        sys.exit(EXIT_LIMIT)


# --- commands -------------------------------------------------------------------------


@click.group()
@click.option("--budget-mib", type=int, default=None, envvar="GROUPCONN_BUDGET_MIB",
              help="Memory budget for dense searches in MiB (at least 64).")
@click.option("--workers", type=int, default=None, envvar="GROUPCONN_WORKERS",
              help="Worker threads for the whole-set search.")
@click.option("--timeout", type=float, default=None, envvar="GROUPCONN_TIMEOUT",
              help="Per-search timeout in seconds.")
@click.option("--format", "output_format", type=click.Choice(["json", "text"]), default="json")
@click.pass_context
def main(ctx, budget_mib, workers, timeout, output_format):
    """Group-connectivity verification lab for multigraphs."""
    try:
        cfg = RunConfig.from_env(
            {},
            memory_budget_bytes=None if budget_mib is None else budget_mib << 20,
            worker_count=workers,
            timeout_seconds=timeout,
            output_format=output_format,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    ctx.ensure_object(dict)
    ctx.obj["config"] = cfg
    ctx.obj.setdefault("catalog", DEFAULT_CATALOG)


@main.command()
@click.argument("graph", type=GRAPH)
@click.option("--group", "group", type=GROUP, required=True, help="Group such as Z4 or Z2xZ2.")
@click.option("--boundary", type=click.Path(exists=True, dir_okay=False),
              help="Decide one boundary given as '<vertex> <element>' lines.")
@click.option("--algo", type=click.Choice(["tree", "frontier", "bitset"]), default="bitset",
              help="Engine for the decision.")
@click.option("--witness", "n_witness", type=int, default=0, help="List up to N failed boundaries.")
@click.pass_context
def check(ctx, graph, group, boundary, algo, n_witness):
    """Decide S-connectivity of GRAPH, or whether one boundary is realisable."""
    cfg: RunConfig = ctx.obj["config"]
    start = time.monotonic()
    width = edge_order_heuristic(graph)[1] if graph.m else 0
    deadline = cfg.deadline()

    if boundary:
        try:
            beta = parse_boundary(Path(boundary).read_text(), graph, group)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--boundary") from None

        def run():
            if algo == "bitset":
                return flow_exists(graph, group, beta, "bitset", cfg.memory_budget_bytes, deadline), None
            phi = flow_with_boundary(graph, group, beta, algo, cfg.memory_budget_bytes, deadline)
            return phi is not None, phi

        ok, phi = _limited(run)
        _emit(ctx, {
            "graph_name": graph.name, "group": str(group),
            "boundary": [group.format_element(b) for b in beta],
            "flow_exists": ok, "algo": algo,
            "flow": None if phi is None else [group.format_element(x) for x in phi],
            "frontier_width": width, "elapsed_ms": int((time.monotonic() - start) * 1000),
        })
        sys.exit(EXIT_PASS if ok else EXIT_FAIL)

    method = "bitset_dp" if algo == "bitset" else "per_boundary"
    if algo == "tree":
        raise click.UsageError("the tree engine only answers single boundaries; use --boundary")
    v = _limited(lambda: is_group_connected(graph, group, method, cfg.memory_budget_bytes,
                                            cfg.worker_count, deadline))
    payload = {
        "graph_name": graph.name, "group": str(group), "connected": v.connected,
        "method": v.method,
        "witness": None if v.witness is None else [group.format_element(b) for b in v.witness],
        "failed_count": v.failed_count, "frontier_width": width,
    }
    if n_witness > 0 and not v.connected:
        ws = _limited(lambda: failed_boundaries(graph, group, n_witness, cfg.memory_budget_bytes,
                                                cfg.worker_count, deadline))
        payload["witnesses"] = [[group.format_element(b) for b in w] for w in ws]
    payload["elapsed_ms"] = int((time.monotonic() - start) * 1000)
    _emit(ctx, payload)
    sys.exit(EXIT_PASS if v.connected else EXIT_FAIL)


@main.command()
@click.argument("graph", type=GRAPH)
@click.option("--group", "group", type=GROUP, required=True)
@click.pass_context
def nzf(ctx, graph, group):
    """Whether GRAPH has a nowhere-zero flow over the group."""
    cfg: RunConfig = ctx.obj["config"]
    start = time.monotonic()
    phi = _limited(lambda: flow_with_boundary(graph, group, zero_boundary(graph, group), "frontier",
                                              cfg.memory_budget_bytes, cfg.deadline()))
    _emit(ctx, {"graph_name": graph.name, "group": str(group), "nowhere_zero_flow": phi is not None,
                "flow": None if phi is None else [group.format_element(x) for x in phi],
                "elapsed_ms": int((time.monotonic() - start) * 1000)})
    sys.exit(EXIT_PASS if phi is not None else EXIT_FAIL)


@main.command()
@click.argument("graph", type=GRAPH)
@click.option("--k", "k", type=click.IntRange(min=2), required=True)
@click.pass_context
def knzf(ctx, graph, k):
    """Whether GRAPH has a nowhere-zero k-flow (decided through Z_k)."""
    cfg: RunConfig = ctx.obj["config"]
    group = AbelianGroup.cyclic(k)
    ok = _limited(lambda: flow_exists(graph, group, zero_boundary(graph, group), "frontier",
                                      cfg.memory_budget_bytes, cfg.deadline()))
    _emit(ctx, {"graph_name": graph.name, "k": k, "k_flow": ok})
    sys.exit(EXIT_PASS if ok else EXIT_FAIL)


@main.group("catalog")
def catalog_cmd():
    """Named graphs and constructions."""


@catalog_cmd.command("list")
@click.pass_context
def catalog_list(ctx):
    cat: Catalog = ctx.obj["catalog"]
    for name in cat.names():
        e = cat.get(name)
        click.echo(f"{name}\tn={e.graph.n}\tm={e.graph.m}\t{e.provenance}")


@catalog_cmd.command("emit")
@click.argument("name")
@click.pass_context
def catalog_emit(ctx, name):
    """Write catalog graph NAME in the graph file format."""
    cat: Catalog = ctx.obj["catalog"]
    if name not in cat.names():
        raise click.BadParameter(f"unknown catalog graph {name!r}", param_hint="NAME")
    click.echo(format_graph(cat.graph(name)), nl=False)


@main.group()
def construct():
    """Build graphs with 2-sums, vertex substitution and triangle expansion."""


@construct.command("two-sum")
@click.argument("g1", type=GRAPH)
@click.argument("edge", type=int)
@click.argument("g2", type=GRAPH)
@click.argument("u2", type=int)
@click.argument("v2", type=int)
def construct_two_sum(g1, edge, g2, u2, v2):
    """G1(EDGE) + G2(U2, V2): tail of EDGE glued to U2, head to V2."""
    try:
        g = two_sum(g1, edge, g2, u2, v2)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    click.echo(format_graph(g), nl=False)


@construct.command("substitute")
@click.argument("host", type=GRAPH)
@click.argument("vertex", type=int)
@click.argument("gadget", type=GRAPH)
@click.option("--attach", required=True, help="Gadget vertices for the host edges at VERTEX, in edge order.")
def construct_substitute(host, vertex, gadget, attach):
    """Replace host VERTEX by a copy of GADGET."""
    try:
        g, _, _ = substitute_vertex(host, vertex, gadget, _ints(attach))
    except (ValueError, IndexError) as exc:
        raise click.UsageError(str(exc)) from None
    click.echo(format_graph(g), nl=False)


@construct.command("triangle-expand")
@click.argument("graph", type=GRAPH)
@click.argument("vertex", type=int)
def construct_triangle_expand(graph, vertex):
    """Replace the 3-vertex VERTEX by a triangle."""
    try:
        g = triangle_expand(graph, vertex)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    click.echo(format_graph(g), nl=False)


@main.command()
@click.argument("graph", type=GRAPH)
@click.option("--size", "k", type=click.IntRange(1, 4), required=True)
@click.pass_context
def cuts(ctx, graph, k):
    """List the minimal edge cuts of size exactly K."""
    found = enumerate_edge_cuts(graph, k)
    _emit(ctx, {"graph_name": graph.name, "edge_connectivity": edge_connectivity(graph), "size": k,
                "count": len(found),
                "cuts": [{"edges": list(c.edges), "side": list(c.side)} for c in found]})


@main.command()
@click.argument("graph", type=GRAPH)
@click.pass_context
def collapsible(ctx, graph):
    """Brute-force collapsibility (at most 24 edges)."""
    try:
        ok = is_collapsible(graph)
    except GroupConnError as exc:
        click.echo(json.dumps({"status": "indeterminate", "reason": str(exc)}))
        sys.exit(EXIT_LIMIT)
    _emit(ctx, {"graph_name": graph.name, "collapsible": ok})
    sys.exit(EXIT_PASS if ok else EXIT_FAIL)


@main.command("certify")
@click.argument("name")
@click.option("--group", "group", type=GROUP, required=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, writable=True),
              help="Write the certificate JSON here.")
@click.option("--replay", "replay_file", type=click.Path(exists=True, dir_okay=False),
              help="Check an existing certificate file instead of building one.")
@click.pass_context
def certify_cmd(ctx, name, group, output, replay_file):
    """Build and replay a certificate for catalog graph NAME over the group."""
    cfg: RunConfig = ctx.obj["config"]
    cat: Catalog = ctx.obj["catalog"]
    rp = Replay(cat, cfg.memory_budget_bytes, cfg.worker_count, cfg.deadline())
    start = time.monotonic()
    if replay_file:
        try:
            cert = CertificateTree.from_json(Path(replay_file).read_text())
        except (ValueError, KeyError) as exc:
            raise click.BadParameter(f"unreadable certificate: {exc}", param_hint="--replay") from None
    else:
        if name not in cat.names():
            raise click.BadParameter(f"unknown catalog graph {name!r}", param_hint="NAME")
        try:
            cert = _limited(lambda: certify(name, group, rp))
        except GroupConnError as exc:
            _emit(ctx, {"name": name, "group": str(group), "replay_ok": False, "reason": str(exc)})
            sys.exit(EXIT_FAIL)
    chk = _limited(lambda: check_certificate(cert, rp))
    if output:
        Path(output).write_text(cert.to_json() + "\n")
    _emit(ctx, {"name": name, "group": cert.conclusion.group, "rule": cert.rule,
                "connected": cert.conclusion.connected, "nodes": cert.size(),
                "replay_ok": chk.ok, "failing_path": list(chk.path), "reason": chk.reason,
                "elapsed_ms": int((time.monotonic() - start) * 1000)})
    sys.exit(EXIT_PASS if chk.ok else EXIT_FAIL)


@main.command("verify-paper")
@click.option("--quick", is_flag=True, help="Skip the two cubic single-boundary negatives.")
@click.option("--replications", is_flag=True, help="Also run the small-graph lemma sweeps.")
@click.option("--override", multiple=True, metavar="NAME=FILE",
              help="Replace H1 or H2 with a graph file.")
@click.pass_context
def verify_paper(ctx, quick, replications, override):
    """Run the whole verification pipeline and print a JSON report."""
    cfg: RunConfig = ctx.obj["config"]
    overrides = {}
    for spec in override:
        name, sep, path = spec.partition("=")
        if not sep or name not in ("H1", "H2"):
            raise click.BadParameter(f"expected H1=FILE or H2=FILE, got {spec!r}", param_hint="--override")
        overrides[name] = load_graph(path)
    cat = Catalog(overrides) if overrides else ctx.obj["catalog"]
    code, report = run_verify_paper(cfg, quick, cat, replications, progress=_progress)
    if cfg.output_format == "json":
        click.echo(json.dumps(report, indent=2))
    else:
        for it in report["items"]:
            click.echo(f"{it['status'].upper():13s} {it['id']}: {it['claim']}")
        click.echo(f"overall: {report['status']}")
    sys.exit(code)


if __name__ == "__main__":  # pragma: no cover
    main()
