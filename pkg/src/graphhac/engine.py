"""Generic clustering framework for triangle-based linkages.

Both drivers share the same merge primitive: the lower-degree cluster is
folded into the higher-degree one, the two neighbor heaps are unioned with
the linkage's combine, and every neighbor of the folded cluster relabels its
entry to the survivor. The chain driver walks best-neighbor paths with a
stack and merges reciprocal pairs; the heap driver keeps a global max-heap
of per-cluster best edges and merges the current global maximum.
"""

from __future__ import annotations

import heapq
import math

from .dendrogram import Dendrogram, DendrogramBuilder
from .graph import WeightedGraph
from .heaps import new_heap
from .linkage import LinkageError, combine_fn, is_triangle_based


class RunAudit:
    """Opt-in instrumentation collected during a clustering run."""

    def __init__(
        self,
        check_mirror: bool = False,
        check_total_edges: bool = False,
        check_in_edges: bool = False,
        check_sandwich: bool = False,
    ):
        self.check_mirror = check_mirror
        self.check_total_edges = check_total_edges
        self.check_in_edges = check_in_edges
        self.check_sandwich = check_sandwich
        self.merge_degrees: list[tuple[int, int]] = []
        self.stack_pushes = 0
        self.rebuild_counts: dict[int, int] = {}
        self.flip_count = 0
        self.max_outdegree = 0
        self.orientation_events: list[tuple[str, int, int]] | None = None
        self.final_orientation: set[tuple[int, int]] | None = None


def merge_cost_total(trace: list[tuple[int, int]]) -> int:
    """Total merge cost: sum of min(deg u, deg v) over the recorded merges."""
    return sum(min(du, dv) for du, dv in trace)


def merge_cost_bound(m: int) -> float:
    """Budget implied by the token-doubling argument: 2m(log2(2m) + 1)."""
    return 2.0 * m * (math.log2(2 * m) + 1.0) if m > 0 else 0.0


class ClusterState:
    """Live clustering over a graph for one triangle-based linkage run."""

    def __init__(self, graph: WeightedGraph, kind: str, heap_impl: str = "tree"):
        if not is_triangle_based(kind):
            raise LinkageError(
                f"{kind!r} is not triangle-based; use the average-linkage engines"
            )
        self.n = graph.n
        self.kind = kind
        self.combine = combine_fn(kind)
        self.active = [True] * graph.n
        self.size = [1] * graph.n
        adj = graph.adjacency()
        self.heaps = [
            new_heap(heap_impl, sorted(adj[v].items())) for v in range(graph.n)
        ]
        self.total_edges = [len(adj[v]) for v in range(graph.n)]
        self.builder = DendrogramBuilder(graph.n)

    def degree(self, c: int) -> int:
        return len(self.heaps[c])

    def check_mirror(self) -> None:
        """Heaps of active clusters must mirror the contracted graph."""
        for c in range(self.n):
            if not self.active[c]:
                continue
            for k, p in self.heaps[c].entries():
                assert self.active[k], f"heap({c}) references inactive {k}"
                back = self.heaps[k].get(c)
                assert back == p, f"asymmetric edge ({c},{k}): {p} vs {back}"

    def check_total_edges(self, m: int) -> None:
        total = sum(self.total_edges[c] for c in range(self.n) if self.active[c])
        assert total == 2 * m, f"sum of total_edges {total} != 2m = {2 * m}"


def merge_clusters(
    state: ClusterState,
    a: int,
    b: int,
    weight: float | None = None,
    audit: RunAudit | None = None,
) -> int:
    """Fold the lower-degree cluster of {a, b} into the other; returns the
    surviving cluster id. `weight` defaults to the stored weight of (a, b)."""
    if not (state.active[a] and state.active[b]):
        raise ValueError(f"merge of inactive cluster: ({a},{b})")
    w_ab = state.heaps[a].get(b)
    if w_ab is None or state.heaps[b].get(a) is None:
        raise ValueError(f"no mutual edge between {a} and {b}")
    if weight is None:
        weight = w_ab
    deg_a, deg_b = state.degree(a), state.degree(b)
    if (deg_a, a) < (deg_b, b):  # fold smaller degree; tie folds smaller id
        folded, survivor = a, b
    else:
        folded, survivor = b, a
    if audit is not None:
        audit.merge_degrees.append((deg_a, deg_b))

    state.heaps[folded].delete(survivor)
    state.heaps[survivor].delete(folded)
    folded_nbrs = state.heaps[folded].keys()
    state.heaps[survivor] = state.heaps[folded].union(
        state.heaps[survivor], state.combine
    )
    for c in folded_nbrs:
        state.heaps[c].relabel(folded, survivor, state.combine)
    state.active[folded] = False
    state.size[survivor] += state.size[folded]
    state.total_edges[survivor] += state.total_edges[folded]
    state.builder.record(folded, survivor, weight, state.size[survivor])
    if audit is not None and audit.check_mirror:
        state.check_mirror()
    return survivor


def _finish(state: ClusterState) -> Dendrogram:
    return state.builder.finish([c for c in range(state.n) if state.active[c]])


def chain_hac(
    graph: WeightedGraph,
    kind: str,
    *,
    heap_impl: str = "tree",
    audit: RunAudit | None = None,
) -> Dendrogram:
    """Nearest-neighbor-chain driver. Merges happen only between clusters
    that are mutual best neighbors under the (max weight, min id) tie rule."""
    if graph.n == 0:
        raise ValueError("empty graph")
    state = ClusterState(graph, kind, heap_impl)
    worklist = list(range(graph.n))
    on_stack: set[int] = set()
    i = 0
    while i < len(worklist):
        start = worklist[i]
        i += 1
        if not state.active[start] or state.degree(start) == 0:
            continue
        stack = [start]
        on_stack.add(start)
        if audit is not None:
            audit.stack_pushes += 1
        while stack:
            t = stack[-1]
            if state.degree(t) == 0:  # finished component root
                on_stack.discard(stack.pop())
                continue
            b, _w = state.heaps[t].best_edge()
            if b in on_stack:
                on_stack.discard(stack.pop())
                partner = stack[-1]
                w = state.heaps[t].get(partner)
                survivor = merge_clusters(state, t, partner, w, audit)
                on_stack.discard(stack.pop())
                worklist.append(survivor)
            else:
                stack.append(b)
                on_stack.add(b)
                if audit is not None:
                    audit.stack_pushes += 1
    if audit is not None:
        assert audit.stack_pushes <= 2 * graph.n - 1, "stack discipline violated"
        if audit.check_total_edges:
            state.check_total_edges(graph.m)
    return _finish(state)


def heap_hac(
    graph: WeightedGraph,
    kind: str,
    *,
    heap_impl: str = "tree",
    audit: RunAudit | None = None,
) -> Dendrogram:
    """Global-heap driver. Extracts the maximum stored edge; entries whose
    endpoint went inactive, or that no longer match their cluster's current
    best edge, are lazily replaced by a fresh best-edge entry."""
    if graph.n == 0:
        raise ValueError("empty graph")
    state = ClusterState(graph, kind, heap_impl)
    heap: list[tuple[float, int, int]] = []
    for v in range(graph.n):
        if state.degree(v) > 0:
            nbr, w = state.heaps[v].best_edge()
            heap.append((-w, v, nbr))
    heapq.heapify(heap)
    while heap:
        nw, u, v = heapq.heappop(heap)
        if not state.active[u]:
            continue
        if not state.active[v]:
            if state.degree(u) > 0:
                nbr, w = state.heaps[u].best_edge()
                heapq.heappush(heap, (-w, u, nbr))
            continue
        nbr, w = state.heaps[u].best_edge()
        if nbr != v or w != -nw:  # stale entry: requeue the current best
            heapq.heappush(heap, (-w, u, nbr))
            continue
        survivor = merge_clusters(state, u, v, w, audit)
        if state.degree(survivor) > 0:
            nbr, w = state.heaps[survivor].best_edge()
            heapq.heappush(heap, (-w, survivor, nbr))
    if audit is not None and audit.check_total_edges:
        state.check_total_edges(graph.m)
    return _finish(state)
