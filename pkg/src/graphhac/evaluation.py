"""Dendrogram flattening, partition quality scores, and the merge-trace
closeness audit."""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .dendrogram import Dendrogram
from .graph import WeightedGraph


def cut_dendrogram(d: Dendrogram, target_clusters: int) -> list[int]:
    """Flatten to exactly `target_clusters` groups by undoing merges from the
    weakest upward: the n - target strongest merges are kept (stable on the
    recorded order, so for greedy-ordered dendrograms this is exactly the
    first n - target merges). Labels are 0-based, contiguous, assigned in
    order of each group's first leaf."""
    n = d.n
    if not 1 <= target_clusters <= n:
        raise ValueError(f"target_clusters {target_clusters} outside [1, {n}]")
    keep = n - target_clusters
    if keep > len(d.merges):
        raise ValueError(
            f"cannot form {target_clusters} clusters: input has "
            f"{n - len(d.merges)} components"
        )
    by_weight = sorted(range(len(d.merges)), key=lambda i: -d.merges[i].weight)
    kept = sorted(by_weight[:keep])
    kept_set = set(kept)
    parent = list(range(n + len(d.merges)))
    for i in kept:
        m = d.merges[i]
        for side in (m.left, m.right):
            if side >= n and side - n not in kept_set:
                # every engine here emits monotone trees; reject others
                raise ValueError(
                    "dendrogram weights are not monotone: cut is not a tree level"
                )
        parent[m.left] = parent[m.right] = n + i

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    labels = [0] * n
    seen: dict[int, int] = {}
    for leaf in range(n):
        root = find(leaf)
        labels[leaf] = seen.setdefault(root, len(seen))
    return labels


def _comb2(x: int) -> float:
    return x * (x - 1) / 2.0


def ari(a: Sequence[int], b: Sequence[int]) -> float:
    """Adjusted Rand index via the pair-counting contingency table.

    1.0 iff the partitions are identical up to label permutation; 0 expected
    for independent random partitions; symmetric."""
    if len(a) != len(b):
        raise ValueError(f"label length mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    index = sum(_comb2(c) for c in Counter(zip(a, b)).values())
    sum_a = sum(_comb2(c) for c in Counter(a).values())
    sum_b = sum(_comb2(c) for c in Counter(b).values())
    total = _comb2(n)
    expected = sum_a * sum_b / total if total else 0.0
    max_index = (sum_a + sum_b) / 2.0
    if max_index == expected:  # both partitions trivial, hence identical
        return 1.0
    return (index - expected) / (max_index - expected)


def nmi(a: Sequence[int], b: Sequence[int]) -> float:
    """Mutual information normalized by the arithmetic mean of the two label
    entropies; 0 by convention when both entropies vanish. In [0, 1]."""
    if len(a) != len(b):
        raise ValueError(f"label length mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    ca, cb = Counter(a), Counter(b)
    cab = Counter(zip(a, b))
    h_a = -sum((c / n) * math.log(c / n) for c in ca.values())
    h_b = -sum((c / n) * math.log(c / n) for c in cb.values())
    denom = (h_a + h_b) / 2.0
    if denom == 0.0:
        return 0.0
    info = sum(
        (c / n) * math.log(n * c / (ca[x] * cb[y]))
        for (x, y), c in cab.items()
    )
    return min(1.0, max(0.0, info / denom))


@dataclass(frozen=True)
class LevelScores:
    best_ari: float
    best_ari_at: int
    best_nmi: float
    best_nmi_at: int
    table: tuple[tuple[int, float, float], ...]  # (clusters, ari, nmi)


def best_level_scores(
    d: Dendrogram,
    ground_truth: Sequence[int],
    levels: Sequence[int] | None = None,
) -> LevelScores:
    """Score every tree level (cluster count) against the ground truth and
    report the maxima. `levels` restricts the sweep to a sampled subset."""
    if len(ground_truth) != d.n:
        raise ValueError(f"expected {d.n} labels, got {len(ground_truth)}")
    n_components = d.n - len(d.merges)
    if levels is None:
        ks: Sequence[int] = range(n_components, d.n + 1)
    else:
        ks = sorted(set(levels))
        if any(k < n_components or k > d.n for k in ks):
            raise ValueError("sampled level outside the valid cluster counts")
    table = []
    best_a, best_a_at, best_n, best_n_at = -math.inf, 0, -math.inf, 0
    for k in ks:
        labels = cut_dendrogram(d, k)
        a = ari(labels, ground_truth)
        m = nmi(labels, ground_truth)
        table.append((k, a, m))
        if a > best_a:
            best_a, best_a_at = a, k
        if m > best_n:
            best_n, best_n_at = m, k
    return LevelScores(best_a, best_a_at, best_n, best_n_at, tuple(table))


@dataclass(frozen=True)
class ClosenessReport:
    passed: bool
    worst_ratio: float
    worst_step: int
    merges: int


def closeness_audit(
    graph: WeightedGraph, d: Dendrogram, epsilon: float
) -> ClosenessReport:
    """Replay a merge trace on an exact quadratic simulator and check that
    every merged edge's true weight was >= (1-epsilon) times the true current
    maximum at that step (with 1e-9 absolute slack)."""
    n = graph.n
    if d.n != n:
        raise ValueError("trace leaf count does not match the graph")
    adj: dict[int, dict[int, float]] = {v: {} for v in range(n)}
    size = {v: 1 for v in range(n)}
    for u, v, w in graph.edges:
        adj[u][v] = w
        adj[v][u] = w
    heap: list[tuple[float, int, int]] = [(-w, u, v) for u, v, w in graph.edges]
    heapq.heapify(heap)

    def current_max() -> float:
        while heap:
            nw, u, v = heap[0]
            if u in adj and v in adj.get(u, {}) and (
                adj[u][v] / (size[u] * size[v]) == -nw
            ):
                return -nw
            heapq.heappop(heap)
        return -math.inf

    worst, worst_step = math.inf, -1
    for i, m in enumerate(d.merges):
        l, r = m.left, m.right
        if l not in adj or r not in adj:
            raise ValueError(f"merge {i} references a dead or unknown cluster")
        if r not in adj[l]:
            raise ValueError(f"merge {i} joins non-adjacent clusters {l},{r}")
        w_merged = adj[l][r] / (size[l] * size[r])
        w_max = current_max()
        ratio = 1.0 if w_max == -math.inf else w_merged / w_max
        if ratio < worst:
            worst, worst_step = ratio, i
        new = n + i
        size[new] = size.pop(l) + size.pop(r)
        row_l, row_r = adj.pop(l), adj.pop(r)
        del row_l[r], row_r[l]
        merged_row: dict[int, float] = {}
        for c, cs in row_l.items():
            del adj[c][l]
            merged_row[c] = cs
        for c, cs in row_r.items():
            del adj[c][r]
            merged_row[c] = merged_row.get(c, 0.0) + cs
        adj[new] = merged_row
        ns = size[new]
        for c, cs in merged_row.items():
            adj[c][new] = cs
            heapq.heappush(heap, (-(cs / (ns * size[c])), new, c))
    passed = worst >= (1.0 - epsilon) - 1e-9
    return ClosenessReport(passed, worst, worst_step, len(d.merges))
