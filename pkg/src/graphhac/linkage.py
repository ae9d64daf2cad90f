"""Linkage measures: pairwise combine rules for the triangle-based measures
and the normalized weight for average (UPGMA) linkage.

An absent edge means undefined similarity; absence is represented by key
absence in the neighbor heaps, never by a sentinel weight, so combine
functions only ever see two real weights.
"""

from __future__ import annotations

from .heaps import CombineFn

SINGLE = "single"
COMPLETE = "complete"
WPGMA = "wpgma"
AVG_EXACT = "avg-exact"
AVG_APPROX = "avg-approx"

TRIANGLE_KINDS = (SINGLE, COMPLETE, WPGMA)
AVERAGE_KINDS = (AVG_EXACT, AVG_APPROX)
ALL_KINDS = TRIANGLE_KINDS + AVERAGE_KINDS


class LinkageError(ValueError):
    pass


def _mean(a: float, b: float) -> float:
    return (a + b) / 2.0


_COMBINES: dict[str, CombineFn] = {
    SINGLE: max,
    COMPLETE: min,
    WPGMA: _mean,
}


def is_triangle_based(kind: str) -> bool:
    if kind not in ALL_KINDS:
        raise LinkageError(f"unknown linkage {kind!r}; expected one of {ALL_KINDS}")
    return kind in TRIANGLE_KINDS


def combine_fn(kind: str) -> CombineFn:
    """The weight-combine used on key collisions during union/relabel."""
    try:
        return _COMBINES[kind]
    except KeyError:
        raise LinkageError(
            f"{kind!r} has no pairwise combine; average linkage merges raw "
            "cut sums, not stored weights"
        ) from None


def combine_weights(kind: str, w1: float, w2: float) -> float:
    """Combine two existing weights under a triangle-based linkage."""
    return combine_fn(kind)(w1, w2)


def average_weight(cut_sum: float, size_a: int, size_b: int) -> float:
    """UPGMA similarity: total cut weight over the number of possible pairs."""
    return cut_sum / (size_a * size_b)
