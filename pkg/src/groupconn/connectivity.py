"""Deciding S-connectivity and extracting failed boundaries."""

from __future__ import annotations

from dataclasses import dataclass

from groupconn.flow import (
    DEFAULT_BUDGET,
    Boundary,
    Deadline,
    achievable_boundaries,
    boundary_at,
    flow_exists,
)
from groupconn.graph import Multigraph
from groupconn.group import AbelianGroup

METHODS = ("bitset_dp", "per_boundary", "certificate")


@dataclass(frozen=True)
class ConnectivityVerdict:
    connected: bool
    witness: Boundary | None = None
    failed_count: int | None = None
    method: str = "bitset_dp"

    def __post_init__(self):
        if self.connected and self.witness is not None:
            raise ValueError("a connected verdict carries no witness")
        if not self.connected and self.witness is None:
            raise ValueError("a negative verdict needs a witness boundary")


def _split_witness(g: Multigraph, group: AbelianGroup) -> Boundary:
    # x on the first component, -x on the second: no assignment can realise it
    comps = g.components()
    x = group.elements(nonzero_only=True)[0]
    vals = [group.zero] * g.n
    vals[comps[0][0]] = x
    vals[comps[1][0]] = group.negate(x)
    return tuple(vals)


def is_group_connected(
    g: Multigraph,
    group: AbelianGroup,
    method: str = "bitset_dp",
    budget_bytes: int = DEFAULT_BUDGET,
    workers: int = 1,
    deadline: Deadline | None = None,
) -> ConnectivityVerdict:
    """Whether every zero-sum boundary of ``g`` has a nowhere-zero preimage.

    ``bitset_dp`` builds the whole achievable set and reports the lowest
    missing boundary index as the witness together with the number missing.
    ``per_boundary`` runs the frontier search on every zero-sum boundary in
    index order and stops at the first failure.
    """
    deadline = deadline or Deadline(None)
    if g.n <= 1:
        return ConnectivityVerdict(True, None, 0, method)
    if not g.is_connected():
        return ConnectivityVerdict(False, _split_witness(g, group), None, "per_boundary")
    if method == "bitset_dp":
        bs = achievable_boundaries(g, group, budget_bytes, workers, deadline)
        missing = bs.missing_count
        if missing == 0:
            return ConnectivityVerdict(True, None, 0, method)
        first = next(bs.missing_indices(limit=1))
        return ConnectivityVerdict(False, boundary_at(group, g.n, first), missing, method)
    if method == "per_boundary":
        total = group.order ** (g.n - 1)
        for idx in range(total):
            beta = boundary_at(group, g.n, idx)
            if not flow_exists(g, group, beta, "frontier", budget_bytes, deadline):
                return ConnectivityVerdict(False, beta, None, method)
        return ConnectivityVerdict(True, None, 0, method)
    raise ValueError(f"unknown method {method!r}")


def failed_boundaries(
    g: Multigraph,
    group: AbelianGroup,
    limit: int,
    budget_bytes: int = DEFAULT_BUDGET,
    workers: int = 1,
    deadline: Deadline | None = None,
) -> list[Boundary]:
    """Up to ``limit`` boundaries without a nowhere-zero preimage, by increasing index."""
    if limit <= 0 or g.n <= 1:
        return []
    bs = achievable_boundaries(g, group, budget_bytes, workers, deadline or Deadline(None))
    return [boundary_at(group, g.n, i) for i in bs.missing_indices(limit)]
