"""Average-linkage (UPGMA) engines.

All three engines keep the raw cut sum of every live cluster edge in a
shared table keyed by the unordered cluster-id pair, so the true similarity
cut/( |A| * |B| ) is always a pure function of current sizes. Neighbor-heap
priorities store cut/|B| for the entry of B in heap(A); the owner's 1/|A|
factor is applied only when a weight is extracted, which keeps an owner's
own growth from invalidating its stored priorities.

* naive_avg_hac: the eager baseline. After every merge it recomputes the
  weight of every edge incident to the merged cluster and requeues it; the
  global queue is validated on pop by exact recomputation. Quadratic on
  dense-degree inputs by design; serves as the oracle for the other two.
* exact_avg_hac: chain driver plus a bounded-outdegree orientation. The
  invariant is that every edge's entry in the heap of its head is true;
  the few out-edges of a cluster are refreshed right before its BestEdge.
* approx_avg_hac: heap driver with per-cluster staleness snapshots. A
  cluster whose size outgrows its snapshot by the internal factor (1+delta)
  rebuilds all incident edges; every merge rewrites the folded side's
  relabeled entries with true values. Yields an epsilon-close run with
  delta = sqrt(1/(1-epsilon)) - 1.
"""

from __future__ import annotations

import heapq
import math

from .dendrogram import Dendrogram, DendrogramBuilder
from .engine import RunAudit
from .graph import WeightedGraph
from .heaps import new_heap
from .orientation import Orientation, default_cap


def delta_from_epsilon(epsilon: float) -> float:
    """Internal staleness factor: (1+delta)^-2 == 1-epsilon."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    return math.sqrt(1.0 / (1.0 - epsilon)) - 1.0


def _pk(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _sum(a: float, b: float) -> float:
    return a + b


def naive_avg_hac(graph: WeightedGraph, audit: RunAudit | None = None) -> Dendrogram:
    """Eager exact baseline over plain adjacency maps."""
    n = graph.n
    if n == 0:
        raise ValueError("empty graph")
    adj = graph.adjacency()  # neighbor -> cut sum
    size = [1] * n
    active = [True] * n
    builder = DendrogramBuilder(n)
    heap: list[tuple[float, int, int]] = [(-w, u, v) for u, v, w in graph.edges]
    heapq.heapify(heap)
    while heap:
        nw, u, v = heapq.heappop(heap)
        if not (active[u] and active[v]):
            continue
        w = -nw
        cs = adj[u].get(v)
        if cs is None or cs / (size[u] * size[v]) != w:
            continue  # stale entry; every current weight was requeued at its last change
        deg_u, deg_v = len(adj[u]), len(adj[v])
        if (deg_u, u) < (deg_v, v):
            folded, survivor = u, v
        else:
            folded, survivor = v, u
        if audit is not None:
            audit.merge_degrees.append((deg_u, deg_v))
        del adj[folded][survivor]
        del adj[survivor][folded]
        size[survivor] += size[folded]
        for c, cut_fc in adj[folded].items():
            del adj[c][folded]
            merged = cut_fc + adj[survivor].get(c, 0.0)
            adj[survivor][c] = merged
            adj[c][survivor] = merged
        adj[folded].clear()
        active[folded] = False
        builder.record(folded, survivor, w, size[survivor])
        ssz = size[survivor]
        for c, cut_sc in adj[survivor].items():
            heapq.heappush(heap, (-(cut_sc / (ssz * size[c])), survivor, c))
    return builder.finish([c for c in range(n) if active[c]])


class _AvgState:
    """Shared live state for the heap-backed average engines."""

    def __init__(self, graph: WeightedGraph, heap_impl: str):
        self.n = graph.n
        self.size = [1] * graph.n
        self.active = [True] * graph.n
        self.cut: dict[tuple[int, int], float] = {
            (u, v): w for u, v, w in graph.edges
        }
        adj = graph.adjacency()
        # initial priority = cut/|nbr| = w since all sizes are 1
        self.heaps = [
            new_heap(heap_impl, sorted(adj[v].items())) for v in range(graph.n)
        ]
        self.builder = DendrogramBuilder(graph.n)

    def degree(self, c: int) -> int:
        return len(self.heaps[c])

    def true_weight(self, a: int, b: int) -> float:
        return self.cut[_pk(a, b)] / (self.size[a] * self.size[b])

    def true_prio(self, owner: int, nbr: int) -> float:
        return self.cut[_pk(owner, nbr)] / self.size[nbr]

    def stored_weight(self, owner: int, nbr: int) -> float:
        return self.heaps[owner].get(nbr) / self.size[owner]

    def merge_structural(
        self, a: int, b: int, audit: RunAudit | None
    ) -> tuple[int, int, list[int], list[int], float]:
        """Fold the smaller-degree side of {a, b} into the other: move cut
        sums, union the heaps, relabel the folded side's neighbors with true
        values written on both endpoints of every moved edge's relabel side.

        Returns (folded, survivor, folded's ex-neighbors, collision keys,
        merge weight)."""
        deg_a, deg_b = self.degree(a), self.degree(b)
        if (deg_a, a) < (deg_b, b):
            folded, survivor = a, b
        else:
            folded, survivor = b, a
        if audit is not None:
            audit.merge_degrees.append((deg_a, deg_b))
        mw = self.true_weight(folded, survivor)
        self.heaps[folded].delete(survivor)
        self.heaps[survivor].delete(folded)
        self.cut.pop(_pk(folded, survivor))
        nbrs = sorted(self.heaps[folded].keys())
        collisions: list[int] = []
        for c in nbrs:
            cut_fc = self.cut.pop(_pk(folded, c))
            key = _pk(survivor, c)
            if key in self.cut:
                self.cut[key] = cut_fc + self.cut[key]
                collisions.append(c)
            else:
                self.cut[key] = cut_fc
        self.size[survivor] += self.size[folded]
        self.active[folded] = False
        # Union detects key collisions; collided priorities are rewritten with
        # true values by the callers (stale snapshots cannot be summed).
        self.heaps[survivor] = self.heaps[folded].union(self.heaps[survivor], _sum)
        new_size = self.size[survivor]
        for c in nbrs:
            cs = self.cut[_pk(survivor, c)]
            self.heaps[c].delete(folded)
            self.heaps[c].upsert(survivor, cs / new_size)
        self.builder.record(folded, survivor, mw, new_size)
        return folded, survivor, nbrs, collisions, mw

    def finish(self) -> Dendrogram:
        return self.builder.finish([c for c in range(self.n) if self.active[c]])


def refresh_out_edges(state: _AvgState, orient: Orientation, a: int) -> None:
    """Rewrite the few entries a stores for its out-neighbors with their true
    priorities; afterwards best_edge(heap(a)) reflects true weights."""
    for c in orient.out_neighbors(a):
        state.heaps[a].update(c, state.true_prio(a, c))


def rebuild_cluster(
    state: _AvgState,
    stale_base: list[float],
    x: int,
    audit: RunAudit | None = None,
) -> None:
    """Write the true similarity of every edge incident to x into both
    endpoint heaps and reset x's staleness snapshot to its current size."""
    xsz = state.size[x]
    for c, prio in list(state.heaps[x].entries()):
        cs = state.cut[_pk(x, c)]
        tp = cs / state.size[c]
        if prio != tp:
            state.heaps[x].update(c, tp)
        state.heaps[c].update(x, cs / xsz)
    stale_base[x] = float(xsz)
    if audit is not None:
        audit.rebuild_counts[x] = audit.rebuild_counts.get(x, 0) + 1


def exact_avg_hac(
    graph: WeightedGraph,
    delta_cap: int | None = None,
    *,
    heap_impl: str = "tree",
    audit: RunAudit | None = None,
) -> Dendrogram:
    """Chain-driver exact UPGMA with a dynamic bounded-outdegree orientation."""
    n = graph.n
    if n == 0:
        raise ValueError("empty graph")
    st = _AvgState(graph, heap_impl)
    cap = delta_cap if delta_cap is not None else default_cap(graph.m)

    def on_flip(tail: int, head: int) -> None:
        # edge now tail -> head: the head's entry must hold the true priority
        st.heaps[head].update(tail, st.true_prio(head, tail))

    orient = Orientation(
        cap,
        on_flip=on_flip,
        record_events=audit is not None,
        paranoid=audit is not None,
    )
    for u, v, _w in graph.edges:
        orient.insert_edge(u, v)

    def merge(x: int, y: int) -> int:
        # drop the folded side's orientation edges before any cut moves so
        # cascades during reinsertion never touch a dead cluster
        deg_x, deg_y = st.degree(x), st.degree(y)
        folded_pre = x if (deg_x, x) < (deg_y, y) else y
        orient.delete_edge(x, y)
        pre_nbrs = [c for c in st.heaps[folded_pre].keys() if c != x and c != y]
        for c in pre_nbrs:
            orient.delete_edge(folded_pre, c)
        folded, survivor, nbrs, _collisions, _mw = st.merge_structural(x, y, audit)
        assert folded == folded_pre
        for c in nbrs:
            st.heaps[survivor].update(c, st.true_prio(survivor, c))
            if not orient.has_edge(c, survivor):
                orient.insert_edge(c, survivor)  # flips rewrite heads' entries
        for c in orient.out_neighbors(survivor):
            st.heaps[c].update(survivor, st.true_prio(c, survivor))
        if audit is not None:
            audit.flip_count = orient.flip_count
            audit.max_outdegree = max(audit.max_outdegree, orient.max_outdegree())
            assert orient.max_outdegree() <= cap, "outdegree cap violated"
            if audit.check_in_edges:
                _check_in_edges(st, orient)
        return survivor

    worklist = list(range(n))
    on_stack: set[int] = set()
    i = 0
    while i < len(worklist):
        start = worklist[i]
        i += 1
        if not st.active[start] or st.degree(start) == 0:
            continue
        stack = [start]
        on_stack.add(start)
        if audit is not None:
            audit.stack_pushes += 1
        while stack:
            t = stack[-1]
            if st.degree(t) == 0:
                on_stack.discard(stack.pop())
                continue
            refresh_out_edges(st, orient, t)
            b, _p = st.heaps[t].best_edge()
            if b in on_stack:
                on_stack.discard(stack.pop())
                partner = stack[-1]
                survivor = merge(t, partner)
                on_stack.discard(stack.pop())
                worklist.append(survivor)
            else:
                stack.append(b)
                on_stack.add(b)
                if audit is not None:
                    audit.stack_pushes += 1
    if audit is not None:
        audit.orientation_events = orient.events
        audit.final_orientation = {
            (u, v) for u, s in orient.out.items() for v in s
        }
    return st.finish()


def _check_in_edges(st: _AvgState, orient: Orientation) -> None:
    """Every oriented edge's head must store the true priority for its tail."""
    for (a, b) in list(st.cut.keys()):
        if b in orient.out.get(a, ()):
            tail, head = a, b
        else:
            tail, head = b, a
        stored = st.heaps[head].get(tail)
        true = st.true_prio(head, tail)
        assert stored is not None and abs(stored - true) <= 1e-9 * max(
            abs(true), 1e-300
        ), f"in-edge ({tail}->{head}) stale: {stored} vs {true}"


def _check_sandwich(st: _AvgState, delta: float) -> None:
    """Stored weights bound true weights: (1+delta)^-2 * stored <= true <= stored."""
    lo = (1.0 + delta) ** -2
    for (a, b) in list(st.cut.keys()):
        for owner, nbr in ((a, b), (b, a)):
            stored = st.stored_weight(owner, nbr)
            true = st.true_weight(owner, nbr)
            assert true <= stored * (1.0 + 1e-9), f"stored too small: {stored} < {true}"
            assert lo * stored <= true * (1.0 + 1e-9), (
                f"stored too stale: {stored} vs true {true} (factor {stored / true})"
            )


def approx_avg_hac(
    graph: WeightedGraph,
    epsilon: float = 0.1,
    *,
    heap_impl: str = "tree",
    audit: RunAudit | None = None,
) -> Dendrogram:
    """Heap-driver UPGMA that is epsilon-close: every merge's true similarity
    is at least (1-epsilon) times the true current maximum."""
    n = graph.n
    if n == 0:
        raise ValueError("empty graph")
    delta = delta_from_epsilon(epsilon)
    st = _AvgState(graph, heap_impl)
    stale_base = [1.0] * n  # size at the last full rebuild

    heap: list[tuple[float, int, int]] = []
    for v in range(n):
        if st.degree(v) > 0:
            nbr, p = st.heaps[v].best_edge()
            heap.append((-p, v, nbr))  # sizes are 1: stored weight = priority
    heapq.heapify(heap)
    while heap:
        nw, u, v = heapq.heappop(heap)
        if not st.active[u]:
            continue
        if not st.active[v]:
            if st.degree(u) > 0:
                nbr, p = st.heaps[u].best_edge()
                heapq.heappush(heap, (-(p / st.size[u]), u, nbr))
            continue
        nbr, p = st.heaps[u].best_edge()
        w = p / st.size[u]
        if nbr != v or w != -nw:  # stale entry: requeue the current best
            heapq.heappush(heap, (-w, u, nbr))
            continue
        folded, survivor, nbrs, collisions, _mw = st.merge_structural(u, v, audit)
        for c in collisions:
            # parallel edges joined this cut: write the true value both ways
            st.heaps[survivor].update(c, st.true_prio(survivor, c))
        if st.size[survivor] >= (1.0 + delta) * stale_base[survivor]:
            rebuild_cluster(st, stale_base, survivor, audit)
        if st.degree(survivor) > 0:
            nbr, p = st.heaps[survivor].best_edge()
            heapq.heappush(heap, (-(p / st.size[survivor]), survivor, nbr))
        if audit is not None and audit.check_sandwich:
            _check_sandwich(st, delta)
    return st.finish()
