"""Dynamic bounded-outdegree edge orientation for the live cluster graph.

A deliberately simple reorient-on-overflow scheme: a new edge is oriented out
of the endpoint with smaller current outdegree (ties toward the smaller id);
whenever a vertex's outdegree exceeds the cap, all of its out-edges are
reversed at once, cascading until every outdegree is within the cap again.
Each reversal invokes the flip callback with the new (tail, head) direction.

With cap >= 2*sqrt(2m) the cascade always settles, since any m-edge graph
admits a sqrt(m)-outdegree orientation; deletions never flip anything.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Callable

FlipFn = Callable[[int, int], None]  # flip(tail, head): edge now tail -> head


def default_cap(m0: int) -> int:
    """Default outdegree cap for a graph that starts with m0 edges.

    Contraction never increases the edge count, so the cap stays valid for
    the whole run."""
    return max(8, math.ceil(2.0 * math.sqrt(2.0 * m0)))


class Orientation:
    def __init__(
        self,
        cap: int,
        on_flip: FlipFn | None = None,
        record_events: bool = False,
        paranoid: bool = False,
    ):
        if cap < 1:
            raise ValueError("cap must be >= 1")
        self.cap = cap
        self.on_flip = on_flip
        self.out: dict[int, set[int]] = {}
        self.flip_count = 0
        self.events: list[tuple[str, int, int]] | None = [] if record_events else None
        self.paranoid = paranoid  # re-check the cap after every public op

    def outdegree(self, u: int) -> int:
        s = self.out.get(u)
        return len(s) if s is not None else 0

    def out_neighbors(self, u: int) -> list[int]:
        s = self.out.get(u)
        return sorted(s) if s else []

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out.get(u, ()) or u in self.out.get(v, ())

    def max_outdegree(self) -> int:
        return max((len(s) for s in self.out.values()), default=0)

    def _orient(self, tail: int, head: int) -> None:
        self.out.setdefault(tail, set()).add(head)
        if self.events is not None:
            self.events.append(("orient", tail, head))

    def insert_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("self-loop")
        if self.has_edge(u, v):
            raise ValueError(f"duplicate edge ({u},{v})")
        tail, head = (u, v) if (self.outdegree(u), u) <= (self.outdegree(v), v) else (v, u)
        self._orient(tail, head)
        self._settle(tail)
        if self.paranoid:
            assert self.max_outdegree() <= self.cap

    def _settle(self, start: int) -> None:
        """Reverse all out-edges of any vertex over the cap until stable."""
        queue = deque([start])
        guard = 0
        limit = 10_000_000
        while queue:
            x = queue.popleft()
            edges = self.out.get(x)
            if edges is None or len(edges) <= self.cap:
                continue
            for y in sorted(edges):  # deterministic cascade order
                edges.discard(y)
                self._orient(y, x)
                self.flip_count += 1
                if self.events is not None:
                    self.events.append(("flip", y, x))
                if self.on_flip is not None:
                    self.on_flip(y, x)
                if len(self.out[y]) > self.cap:
                    queue.append(y)
                guard += 1
                if guard > limit:
                    raise RuntimeError("orientation cascade failed to settle")

    def delete_edge(self, u: int, v: int) -> None:
        if v in self.out.get(u, ()):
            self.out[u].discard(v)
        elif u in self.out.get(v, ()):
            self.out[v].discard(u)
        else:
            raise ValueError(f"edge ({u},{v}) absent")
        if self.events is not None:
            self.events.append(("drop", u, v))
        if self.paranoid:
            assert self.max_outdegree() <= self.cap
