"""Quadratic reference clustering: dense weight matrix, full rescan per merge.

Deliberately simple and independent of the heap/engine code paths so it can
act as the correctness oracle. Absent edges are NaN cells. Supports the three
triangle-based linkages plus plain average linkage (tracked as raw cut sums
normalized on demand). Same fold and tie rules as the engines, so on inputs
with distinct weights the merge records match the heap driver exactly.
"""

from __future__ import annotations

import numpy as np

from .dendrogram import Dendrogram, DendrogramBuilder
from .graph import WeightedGraph
from .linkage import AVG_EXACT, AVG_APPROX, COMPLETE, SINGLE, WPGMA

AVERAGE = "average"


def _combine_rows(kind: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """NaN-aware row combine: where only one side exists, keep it."""
    if kind == SINGLE:
        return np.fmax(a, b)
    if kind == COMPLETE:
        return np.fmin(a, b)
    if kind == WPGMA:
        return np.where(np.isnan(a), b, np.where(np.isnan(b), a, (a + b) / 2.0))
    if kind == AVERAGE:  # raw cut sums add
        return np.where(np.isnan(a), b, np.where(np.isnan(b), a, a + b))
    raise ValueError(f"unsupported reference linkage {kind!r}")


def reference_hac(graph: WeightedGraph, kind: str) -> Dendrogram:
    if kind in (AVG_EXACT, AVG_APPROX):
        kind = AVERAGE
    n = graph.n
    if n == 0:
        raise ValueError("empty graph")
    mat = np.full((n, n), np.nan)
    for u, v, w in graph.edges:
        mat[u, v] = mat[v, u] = w
    sizes = np.ones(n)
    active = np.ones(n, dtype=bool)
    builder = DendrogramBuilder(n)
    for _ in range(n - 1):
        if kind == AVERAGE:
            values = mat / np.outer(sizes, sizes)
        else:
            values = mat
        if np.all(np.isnan(values)):
            break  # remaining components are done
        flat = np.nanargmax(values)  # first occurrence: smallest u, then v
        u, v = divmod(int(flat), n)
        w = float(values[u, v])
        deg_u = int(np.count_nonzero(~np.isnan(mat[u])))
        deg_v = int(np.count_nonzero(~np.isnan(mat[v])))
        if (deg_u, u) < (deg_v, v):
            folded, survivor = u, v
        else:
            folded, survivor = v, u
        row = _combine_rows(kind, mat[folded], mat[survivor])
        mat[survivor, :] = row
        mat[:, survivor] = row
        mat[folded, :] = np.nan
        mat[:, folded] = np.nan
        mat[survivor, survivor] = np.nan
        sizes[survivor] += sizes[folded]
        sizes[folded] = 1  # row/col already NaN; keeps outer() division clean
        active[folded] = False
        builder.record(folded, survivor, w, int(sizes[survivor]))
    return builder.finish([int(c) for c in np.flatnonzero(active)])
