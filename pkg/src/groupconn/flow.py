"""Boundaries of group-valued edge assignments and the flow search engines.

Three engines answer "is there a nowhere-zero assignment with boundary beta":

``tree``
    fix a spanning forest, enumerate every nonzero assignment of the
    non-tree edges and force the tree edges leaf-inward.  Simple and
    independent; used as the oracle.
``frontier``
    dynamic program over an edge order.  The state is the tuple of partial
    boundary sums of the active vertices, stored as a dense boolean array
    with one axis per active vertex.  A vertex whose edges are all processed
    is pinned to its target value and its axis is dropped.
``bitset``
    membership in :func:`achievable_boundaries`, which computes the set of
    all boundaries of nowhere-zero assignments at once as a packed bit vector.

The boundary of an assignment is ``sum(out) - sum(in)`` under the graph's
reference orientation.
"""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from groupconn.errors import BudgetExceeded, SearchTimeout
from groupconn.graph import Multigraph
from groupconn.group import AbelianGroup, GroupElement

log = logging.getLogger(__name__)

Boundary = tuple[GroupElement, ...]
FlowAssignment = tuple[GroupElement, ...]

DEFAULT_BUDGET = 1 << 30
ALGORITHMS = ("tree", "frontier", "bitset")


class Deadline:
    """Cooperative time limit checked inside search loops."""

    def __init__(self, seconds: float | None):
        self.expires = None if seconds is None else time.monotonic() + seconds

    def check(self, what: str = "search"):
        if self.expires is not None and time.monotonic() > self.expires:
            raise SearchTimeout(f"{what} exceeded its time limit")


_NO_DEADLINE = Deadline(None)


# --- boundaries --------------------------------------------------------------------


def check_boundary(g: Multigraph, group: AbelianGroup, beta) -> Boundary:
    beta = tuple(group.check(b) for b in beta)
    if len(beta) != g.n:
        raise ValueError(f"boundary has {len(beta)} values, graph has {g.n} vertices")
    if group.sum(beta) != group.zero:
        raise ValueError("boundary is not zero-sum")
    return beta


def zero_boundary(g: Multigraph, group: AbelianGroup) -> Boundary:
    return (group.zero,) * g.n


def boundary_of(g: Multigraph, group: AbelianGroup, phi) -> Boundary:
    if len(phi) != g.m:
        raise ValueError(f"assignment has {len(phi)} values, graph has {g.m} edges")
    out = [group.zero] * g.n
    for (t, h), x in zip(g.edges, phi):
        out[t] = group.add(out[t], x)
        out[h] = group.sub(out[h], x)
    return tuple(out)


def boundary_index(group: AbelianGroup, beta) -> int:
    """Mixed-radix code of ``beta`` on vertices 0..n-2 (vertex 0 least significant)."""
    idx, stride = 0, 1
    for b in beta[:-1]:
        idx += group.index(b) * stride
        stride *= group.order
    return idx


def boundary_at(group: AbelianGroup, n: int, index: int) -> Boundary:
    """Inverse of :func:`boundary_index`; the last vertex takes the negated sum."""
    if n == 0:
        return ()
    q = group.order
    if not 0 <= index < q ** (n - 1):
        raise IndexError(f"boundary index {index} out of range")
    vals = []
    for _ in range(n - 1):
        index, r = divmod(index, q)
        vals.append(group.element(r))
    vals.append(group.negate(group.sum(vals)))
    return tuple(vals)


def parse_boundary(text: str, g: Multigraph, group: AbelianGroup) -> Boundary:
    """Read ``<vertex> <element>`` lines; omitted vertices are zero."""
    vals = [group.zero] * g.n
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<vertex> <element>'")
        v = int(parts[0])
        if not 0 <= v < g.n:
            raise ValueError(f"line {lineno}: vertex {v} out of range")
        if v in seen:
            raise ValueError(f"line {lineno}: vertex {v} listed twice")
        seen.add(v)
        vals[v] = group.parse_element(parts[1])
    return check_boundary(g, group, vals)


def format_boundary(group: AbelianGroup, beta) -> str:
    return "".join(f"{v} {group.format_element(b)}\n" for v, b in enumerate(beta))


# --- spanning-tree enumeration ---------------------------------------------------------


def _component_sums_zero(g: Multigraph, group: AbelianGroup, beta: Boundary) -> bool:
    return all(group.sum(beta[v] for v in comp) == group.zero for comp in g.components())


def _tree_flow(g: Multigraph, group: AbelianGroup, beta: Boundary, deadline: Deadline):
    if not _component_sums_zero(g, group, beta):
        return None
    add = group.add_table.tolist()
    neg = group.neg_table.tolist()
    target = [group.index(b) for b in beta]

    parent_edge = [-1] * g.n
    seen = [False] * g.n
    order = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for e in g.incidence[v]:
                t, h = g.edges[e]
                w = h if t == v else t
                if not seen[w]:
                    seen[w] = True
                    parent_edge[w] = e
                    queue.append(w)
    tree = {e for e in parent_edge if e >= 0}
    nontree = [e for e in range(g.m) if e not in tree]
    leaf_inward = [v for v in reversed(order) if parent_edge[v] >= 0]

    values = [0] * g.m
    for count, assignment in enumerate(itertools.product(group.nonzero_indices, repeat=len(nontree))):
        if count % 4096 == 0:
            deadline.check("tree search")
        r = target[:]
        for e, x in zip(nontree, assignment):
            t, h = g.edges[e]
            r[t] = add[r[t]][neg[x]]
            r[h] = add[r[h]][x]
            values[e] = x
        ok = True
        for v in leaf_inward:
            e = parent_edge[v]
            t, h = g.edges[e]
            need = r[v]
            if need == 0:
                ok = False
                break
            values[e] = need if t == v else neg[need]
            p = h if t == v else t
            r[p] = add[r[p]][need]
        if ok:
            return tuple(group.element(x) for x in values)
    return None


# --- frontier dynamic program ----------------------------------------------------------------


def edge_order_heuristic(g: Multigraph) -> tuple[list[int], int]:
    """Greedy edge order keeping few vertices half-processed.

    At each step take the unprocessed edge that leaves the fewest active
    vertices (some but not all incident edges processed); ties go to the
    lower edge index.  Returns the order and the maximum active count.
    """
    deg = g.degrees()
    done = [0] * g.n
    remaining = set(range(g.m))
    active = 0
    width = 0
    order = []

    def delta(w, extra):
        before = 0 < done[w] < deg[w]
        after = 0 < done[w] + extra < deg[w]
        return int(after) - int(before)

    while remaining:
        best, best_key = None, None
        for e in remaining:
            t, h = g.edges[e]
            d = delta(t, 1) + delta(h, 1)
            key = (active + d, e)
            if best_key is None or key < best_key:
                best, best_key = e, key
        t, h = g.edges[best]
        active = best_key[0]
        done[t] += 1
        done[h] += 1
        remaining.discard(best)
        order.append(best)
        width = max(width, active)
    return order, width


def frontier_profile(g: Multigraph, order) -> tuple[int, int]:
    """``(peak_axes, width)`` of an edge order.

    ``width`` is the frontier width; ``peak_axes`` also counts the endpoints
    introduced by an edge before finished vertices are dropped.
    """
    deg = g.degrees()
    done = [0] * g.n
    active: set[int] = set()
    peak = width = 0
    for e in order:
        t, h = g.edges[e]
        active |= {t, h}
        peak = max(peak, len(active))
        for w in (t, h):
            done[w] += 1
            if done[w] == deg[w]:
                active.discard(w)
        width = max(width, len(active))
    return peak, width


@dataclass
class FrontierStats:
    order: list[int]
    width: int
    peak_axes: int
    peak_cells: int
    elapsed_s: float = 0.0


def _frontier_flow(
    g: Multigraph,
    group: AbelianGroup,
    beta: Boundary,
    order=None,
    budget_bytes: int = DEFAULT_BUDGET,
    deadline: Deadline = _NO_DEADLINE,
    want_witness: bool = True,
    stats: FrontierStats | None = None,
):
    q = group.order
    target = [group.index(b) for b in beta]
    deg = g.degrees()
    for v in range(g.n):
        if deg[v] == 0 and target[v] != 0:
            return None
    if order is None:
        order, _ = edge_order_heuristic(g)
    order = list(order)
    if sorted(order) != list(range(g.m)):
        raise ValueError("edge order must be a permutation of the edges")
    peak, width = frontier_profile(g, order)
    peak_cells = q**peak
    # current, next and one image buffer, plus stored history for witnesses
    need = 3 * peak_cells + (g.m * peak_cells if want_witness else 0)
    if need > budget_bytes:
        raise BudgetExceeded(need, budget_bytes, "frontier state")
    if stats is not None:
        stats.order, stats.width, stats.peak_axes, stats.peak_cells = order, width, peak, peak_cells

    add = group.add_table
    neg = group.neg_table
    nonzero = group.nonzero_indices
    # take-index arrays: new[b] = old[take[b]]
    plus = {x: np.ascontiguousarray(add[:, neg[x]]) for x in nonzero}
    minus = {x: np.ascontiguousarray(add[:, x]) for x in nonzero}

    done = [0] * g.n
    active: list[int] = []
    arr = np.ones((), dtype=bool)
    history = []
    for e in order:
        deadline.check("frontier search")
        t, h = g.edges[e]
        introduced = []
        for w in (t, h):
            if w not in active:
                grown = np.zeros(arr.shape + (q,), dtype=bool)
                grown[..., 0] = arr
                arr = grown
                active.append(w)
                introduced.append(w)
        if want_witness:
            history.append((e, list(active), introduced, arr))
        at, ah = active.index(t), active.index(h)
        nxt = np.zeros_like(arr)
        for x in nonzero:
            img = np.take(arr, plus[x], axis=at)
            img = np.take(img, minus[x], axis=ah)
            nxt |= img
        arr = nxt
        for w in (t, h):
            done[w] += 1
            if done[w] == deg[w]:
                ax = active.index(w)
                arr = np.take(arr, target[w], axis=ax)
                active.pop(ax)
        if not arr.any():
            return None
    if not bool(arr):
        return None
    if not want_witness:
        return True

    values = [0] * g.m
    state: dict[int, int] = {}
    for e, act, introduced, pre in reversed(history):
        t, h = g.edges[e]
        post = {w: state.get(w, target[w]) for w in act}
        for x in nonzero:
            cand = dict(post)
            cand[t] = add[cand[t], neg[x]]
            cand[h] = add[cand[h], x]
            if pre[tuple(cand[w] for w in act)]:
                values[e] = x
                break
        else:  # pragma: no cover - reachable states always have a predecessor
            raise AssertionError("witness back-tracking lost the path")
        state = {w: cand[w] for w in act if w not in introduced}
    return tuple(group.element(int(x)) for x in values)


# --- whole-set dynamic program ---------------------------------------------------------------


class BoundarySet:
    """A set of zero-sum boundaries of an ``n``-vertex graph, as a packed bit vector.

    Bit ``i`` stands for :func:`boundary_at` ``(group, n, i)``.  The lowest
    ``word_digits`` vertices are packed inside each 64-bit word (``bits_per_word``
    = q**word_digits bits used); the remaining vertices index the word array,
    whose axis ``k`` holds vertex ``n - 2 - k``.
    """

    def __init__(self, group: AbelianGroup, n: int, words: np.ndarray, word_digits: int):
        self.group = group
        self.n = n
        self.words = words
        self.word_digits = word_digits
        self.bits_per_word = group.order**word_digits

    @property
    def size(self) -> int:
        """Number of zero-sum boundaries, |S|^(n-1)."""
        return self.group.order ** max(self.n - 1, 0)

    @property
    def _full_word(self) -> np.uint64:
        b = self.bits_per_word
        return np.uint64((1 << b) - 1) if b < 64 else np.uint64(0xFFFFFFFFFFFFFFFF)

    @property
    def count(self) -> int:
        return int(np.bitwise_count(self.words).sum(dtype=np.int64))

    @property
    def missing_count(self) -> int:
        return self.size - self.count

    @property
    def is_full(self) -> bool:
        return bool(np.all(self.words == self._full_word))

    def __contains__(self, beta) -> bool:
        return self.contains_index(boundary_index(self.group, beta))

    def contains_index(self, index: int) -> bool:
        w, bit = divmod(index, self.bits_per_word)
        return bool((int(self.words.reshape(-1)[w]) >> bit) & 1)

    def missing_indices(self, limit: int | None = None):
        """Indices of absent boundaries in increasing order."""
        flat = self.words.reshape(-1)
        full = self._full_word
        for w in np.flatnonzero(flat != full):
            word = int(flat[w])
            for bit in range(self.bits_per_word):
                if not (word >> bit) & 1:
                    yield int(w) * self.bits_per_word + bit
                    if limit is not None:
                        limit -= 1
                        if limit <= 0:
                            return

    def to_dense(self) -> np.ndarray:
        """Boolean membership vector of length :attr:`size` (small sets only)."""
        bits = np.unpackbits(self.words.reshape(-1).view(np.uint8), bitorder="little")
        bits = bits.reshape(-1, 64)[:, : self.bits_per_word].reshape(-1)
        return bits.astype(bool)


def _word_digits(q: int, digits: int) -> int:
    w = 0
    while w < digits and q ** (w + 1) <= 64:
        w += 1
    return w


def achievable_bytes(n: int, group: AbelianGroup) -> int:
    digits = max(n - 1, 0)
    w = _word_digits(group.order, digits)
    words = group.order ** (digits - w)
    # current, next, running image and two scratch arrays inside a permutation
    return 5 * 8 * words


class _Packed:
    """Digit permutations on the packed layout of :class:`BoundarySet`."""

    def __init__(self, group: AbelianGroup, digits: int):
        self.q = q = group.order
        self.digits = digits
        self.w = _word_digits(q, digits)
        self.bits = q**self.w
        self.shape = (q,) * (digits - self.w)
        # masks[d][a]: bits of a word whose in-word digit d equals a
        self.masks = []
        for d in range(self.w):
            row = []
            for a in range(q):
                mask = 0
                for b in range(self.bits):
                    if (b // q**d) % q == a:
                        mask |= 1 << b
                row.append(np.uint64(mask))
            self.masks.append(row)

    def axis(self, digit: int) -> int:
        return self.digits - 1 - digit

    def permute(self, arr: np.ndarray, digit: int, perm, out=None) -> np.ndarray:
        """Move value ``a`` of ``digit`` to ``perm[a]`` for every stored bit."""
        if digit >= self.w:
            inv = np.empty(self.q, dtype=np.intp)
            inv[np.asarray(perm)] = np.arange(self.q)
            return np.take(arr, inv, axis=self.axis(digit), out=out)
        stride = self.q**digit
        res = np.zeros_like(arr) if out is None else out
        if out is not None:
            res.fill(0)
        tmp = np.empty_like(arr)
        for a in range(self.q):
            shift = (int(perm[a]) - a) * stride
            np.bitwise_and(arr, self.masks[digit][a], out=tmp)
            if shift > 0:
                np.left_shift(tmp, np.uint64(shift), out=tmp)
            elif shift < 0:
                np.right_shift(tmp, np.uint64(-shift), out=tmp)
            np.bitwise_or(res, tmp, out=res)
        return res


def achievable_boundaries(
    g: Multigraph,
    group: AbelianGroup,
    budget_bytes: int = DEFAULT_BUDGET,
    workers: int = 1,
    deadline: Deadline = _NO_DEADLINE,
) -> BoundarySet:
    """All boundaries of nowhere-zero assignments of ``g``.

    Starts from the zero boundary and, edge by edge, replaces the set by the
    union over nonzero ``x`` of its image under "add x at the tail, subtract x
    at the head".  The last vertex is implicit.  With ``workers > 1`` each
    image is computed in slices along an untouched axis; the result is
    bit-identical to the sequential run.
    """
    digits = max(g.n - 1, 0)
    need = achievable_bytes(g.n, group)
    if need > budget_bytes:
        raise BudgetExceeded(need, budget_bytes, "achievable boundary set")
    pk = _Packed(group, digits)
    cur = np.zeros(pk.shape, dtype=np.uint64)
    cur[(0,) * len(pk.shape)] = 1
    add = group.add_table
    neg = group.neg_table
    last = g.n - 1
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for k, (t, h) in enumerate(g.edges):
            deadline.check("achievable boundary search")
            nxt = np.zeros_like(cur)
            touched = [d for d in (t, h) if d != last]
            moves = []
            for x in group.nonzero_indices:
                step = []
                if t != last:
                    step.append((t, add[:, x]))
                if h != last:
                    step.append((h, add[:, neg[x]]))
                moves.append(step)
            free_axes = [a for a in range(len(pk.shape)) if a not in {pk.axis(d) for d in touched if d >= pk.w}]
            if pool is not None and free_axes:
                ax = free_axes[0]
                chunks = np.array_split(np.arange(pk.q), min(workers, pk.q))
                jobs = []
                for chunk in chunks:
                    sl = [slice(None)] * len(pk.shape)
                    sl[ax] = slice(int(chunk[0]), int(chunk[-1]) + 1)
                    jobs.append(pool.submit(_apply_moves, pk, cur[tuple(sl)], nxt[tuple(sl)], moves))
                for j in jobs:
                    j.result()
            else:
                _apply_moves(pk, cur, nxt, moves)
            cur = nxt
            if log.isEnabledFor(logging.DEBUG):
                log.debug("edge %d/%d done", k + 1, g.m)
    finally:
        if pool is not None:
            pool.shutdown()
    return BoundarySet(group, g.n, cur, pk.w)


def _apply_moves(pk: _Packed, cur: np.ndarray, nxt: np.ndarray, moves) -> None:
    for step in moves:
        img = cur
        for digit, perm in step:
            img = pk.permute(img, digit, perm)
        np.bitwise_or(nxt, img, out=nxt)


# --- public queries ----------------------------------------------------------------------------


def flow_with_boundary(
    g: Multigraph,
    group: AbelianGroup,
    beta,
    algo: str = "frontier",
    budget_bytes: int = DEFAULT_BUDGET,
    deadline: Deadline = _NO_DEADLINE,
    order=None,
    stats: FrontierStats | None = None,
):
    """A nowhere-zero assignment with boundary ``beta``, or None.

    ``algo`` is ``"tree"`` or ``"frontier"``.  Both return the same verdict;
    ``tree`` returns the witness with the lexicographically least values on
    the non-tree edges.
    """
    beta = check_boundary(g, group, beta)
    start = time.monotonic()
    if algo == "tree":
        res = _tree_flow(g, group, beta, deadline)
    elif algo == "frontier":
        res = _frontier_flow(g, group, beta, order, budget_bytes, deadline, True, stats)
    else:
        raise ValueError(f"unknown algorithm {algo!r}; use 'tree' or 'frontier'")
    if stats is not None:
        stats.elapsed_s = time.monotonic() - start
    return res


def flow_exists(
    g: Multigraph,
    group: AbelianGroup,
    beta,
    algo: str = "frontier",
    budget_bytes: int = DEFAULT_BUDGET,
    deadline: Deadline = _NO_DEADLINE,
    order=None,
    stats: FrontierStats | None = None,
) -> bool:
    """Boolean version of :func:`flow_with_boundary`; also accepts ``algo="bitset"``.

    The frontier path skips witness bookkeeping here, which keeps its memory
    at a few state arrays.
    """
    beta = check_boundary(g, group, beta)
    if algo == "bitset":
        return beta in achievable_boundaries(g, group, budget_bytes, deadline=deadline)
    if algo == "frontier":
        start = time.monotonic()
        res = _frontier_flow(g, group, beta, order, budget_bytes, deadline, False, stats)
        if stats is not None:
            stats.elapsed_s = time.monotonic() - start
        return bool(res)
    return flow_with_boundary(g, group, beta, algo, budget_bytes, deadline) is not None


def has_nowhere_zero_flow(g: Multigraph, group: AbelianGroup) -> bool:
    return flow_exists(g, group, zero_boundary(g, group))


def has_k_nzf(g: Multigraph, k: int) -> bool:
    """Integer k-NZF existence, decided through a Z_k flow (Tutte's equivalence)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return has_nowhere_zero_flow(g, AbelianGroup.cyclic(k))

