"""Per-cluster neighbor heaps: key = neighbor cluster id, priority = weight.

Two interchangeable representations with identical observable behavior:

* TreeNeighborHeap: a join-based AVL tree keyed by neighbor id, augmented
  with the subtree max priority. Union of sizes (s, l), s <= l, costs
  O(s log(l/s + 1)) tree operations; BestEdge costs O(log n).
* MeldNeighborHeap: a pairing heap (max order: priority, then smaller key)
  plus a hash table mapping key -> heap node, so point edits find their node
  in O(1). Union melds the heaps in O(1) and merges the smaller table into
  the larger, handling key collisions through the collected overlap list.

best_edge ties always break toward the smaller key; priorities are compared
exactly (no epsilons inside the structure).
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator

# Binary combine applied when a key occurs in both operands of union/relabel.
# Must be commutative and deterministic.
CombineFn = Callable[[float, float], float]

HEAP_IMPLS = ("tree", "meld")

_MISSING = object()


class _TreeOps:
    """Test hook: counts tree-node operations (split/join calls, node makes)."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


TREE_OPS = _TreeOps()


class _TNode:
    __slots__ = ("key", "prio", "left", "right", "height", "size", "maxp")

    def __init__(self, key: int, prio: float):
        self.key = key
        self.prio = prio
        self.left = None
        self.right = None
        self.height = 1
        self.size = 1
        self.maxp = prio


def _h(t) -> int:
    return t.height if t is not None else 0


def _sz(t) -> int:
    return t.size if t is not None else 0


def _fix(t) -> None:
    t.height = 1 + max(_h(t.left), _h(t.right))
    t.size = 1 + _sz(t.left) + _sz(t.right)
    m = t.prio
    if t.left is not None and t.left.maxp > m:
        m = t.left.maxp
    if t.right is not None and t.right.maxp > m:
        m = t.right.maxp
    t.maxp = m


def _rot_left(t):
    r = t.right
    t.right = r.left
    r.left = t
    _fix(t)
    _fix(r)
    return r


def _rot_right(t):
    l = t.left
    t.left = l.right
    l.right = t
    _fix(t)
    _fix(l)
    return l


def _node(key: int, prio: float):
    TREE_OPS.count += 1
    return _TNode(key, prio)


def _join(l, mid, r):
    """AVL join: all keys in l < mid.key < all keys in r."""
    TREE_OPS.count += 1
    hl, hr = _h(l), _h(r)
    if hl > hr + 1:
        return _join_right(l, mid, r)
    if hr > hl + 1:
        return _join_left(r, mid, l)
    mid.left = l
    mid.right = r
    _fix(mid)
    return mid


def _join_right(t, mid, r):
    TREE_OPS.count += 1
    if _h(t.right) <= _h(r) + 1:
        mid.left = t.right
        mid.right = r
        _fix(mid)
        if mid.height <= _h(t.left) + 1:
            t.right = mid
            _fix(t)
            return t
        t.right = _rot_right(mid)
        _fix(t)
        return _rot_left(t)
    t.right = _join_right(t.right, mid, r)
    _fix(t)
    if _h(t.right) > _h(t.left) + 1:
        return _rot_left(t)
    return t


def _join_left(t, mid, l):
    TREE_OPS.count += 1
    if _h(t.left) <= _h(l) + 1:
        mid.right = t.left
        mid.left = l
        _fix(mid)
        if mid.height <= _h(t.right) + 1:
            t.left = mid
            _fix(t)
            return t
        t.left = _rot_left(mid)
        _fix(t)
        return _rot_right(t)
    t.left = _join_left(t.left, mid, l)
    _fix(t)
    if _h(t.left) > _h(t.right) + 1:
        return _rot_right(t)
    return t


def _split(t, key):
    """Split by key; returns (left, prio_or_MISSING, right). Reuses nodes."""
    TREE_OPS.count += 1
    if t is None:
        return None, _MISSING, None
    if key < t.key:
        l, f, r = _split(t.left, key)
        return l, f, _join(r, t, t.right)
    if key > t.key:
        l, f, r = _split(t.right, key)
        return _join(t.left, t, l), f, r
    return t.left, t.prio, t.right


def _join2(l, r):
    """Join without a pivot: pop the max key of l to act as one."""
    if l is None:
        return r
    if r is None:
        return l
    t = l
    while t.right is not None:
        t = t.right
    l2, prio, _ = _split(l, t.key)
    return _join(l2, _node(t.key, prio), r)


def _tree_union(a, b, combine: CombineFn):
    if a is None:
        return b
    if b is None:
        return a
    if a.size < b.size:
        a, b = b, a  # split the larger by keys of the smaller; combine is commutative
    l, f, r = _split(a, b.key)
    bl, br = b.left, b.right
    if f is not _MISSING:
        b.prio = combine(f, b.prio)
    lt = _tree_union(l, bl, combine)
    rt = _tree_union(r, br, combine)
    return _join(lt, b, rt)


class TreeNeighborHeap:
    """Augmented balanced tree representation (deterministic)."""

    __slots__ = ("_root",)

    def __init__(self, items: Iterable[tuple[int, float]] = ()):
        self._root = None
        for k, p in items:
            self.insert(k, float(p))

    def __len__(self) -> int:
        return _sz(self._root)

    def __contains__(self, key: int) -> bool:
        return self.get(key) is not None

    def get(self, key: int) -> float | None:
        t = self._root
        while t is not None:
            if key == t.key:
                return t.prio
            t = t.left if key < t.key else t.right
        return None

    def insert(self, key: int, prio: float) -> None:
        l, f, r = _split(self._root, key)
        if f is not _MISSING:
            self._root = _join(l, _node(key, f), r)  # keep the existing entry
            raise KeyError(f"insert: key {key} already present")
        self._root = _join(l, _node(key, prio), r)

    def update(self, key: int, prio: float) -> None:
        t = self._root
        path = []
        while t is not None and t.key != key:
            path.append(t)
            t = t.left if key < t.key else t.right
        if t is None:
            raise KeyError(f"update: key {key} absent")
        t.prio = prio
        _fix(t)
        for p in reversed(path):
            _fix(p)

    def upsert(self, key: int, prio: float) -> None:
        if key in self:
            self.update(key, prio)
        else:
            self.insert(key, prio)

    def delete(self, key: int) -> float:
        l, f, r = _split(self._root, key)
        self._root = _join2(l, r)  # reassembles all surviving entries
        if f is _MISSING:
            raise KeyError(f"delete: key {key} absent")
        return f

    def best_edge(self) -> tuple[int, float]:
        t = self._root
        if t is None:
            raise KeyError("best_edge on empty heap")
        m = t.maxp
        while True:
            if t.left is not None and t.left.maxp == m:
                t = t.left
            elif t.prio == m:
                return t.key, t.prio
            else:
                t = t.right

    def union(self, other: "TreeNeighborHeap", combine: CombineFn) -> "TreeNeighborHeap":
        """Destructive on both operands; returns the merged heap."""
        self._root = _tree_union(self._root, other._root, combine)
        other._root = None
        return self

    def relabel(self, old_key: int, new_key: int, combine: CombineFn) -> None:
        prio = self.delete(old_key)
        ex = self.get(new_key)
        if ex is None:
            self.insert(new_key, prio)
        else:
            self.update(new_key, combine(ex, prio))

    def entries(self) -> Iterator[tuple[int, float]]:
        """In increasing key order."""
        stack, t = [], self._root
        while stack or t is not None:
            while t is not None:
                stack.append(t)
                t = t.left
            t = stack.pop()
            yield t.key, t.prio
            t = t.right

    def keys(self) -> list[int]:
        return [k for k, _ in self.entries()]


class _PNode:
    __slots__ = ("key", "prio", "child", "next", "prev")

    def __init__(self, key: int, prio: float):
        self.key = key
        self.prio = prio
        self.child = None
        self.next = None
        self.prev = None  # previous sibling, or parent if leftmost child


def _dominates(a, b) -> bool:
    return a.prio > b.prio or (a.prio == b.prio and a.key < b.key)


def _meld(a, b):
    if _dominates(b, a):
        a, b = b, a
    b.prev = a
    b.next = a.child
    if a.child is not None:
        a.child.prev = b
    a.child = b
    return a


def _merge_pairs(first):
    """Two-pass pairing over a sibling list; returns the combined root."""
    melds = []
    node = first
    while node is not None:
        a = node
        b = node.next
        node = b.next if b is not None else None
        a.prev = a.next = None
        if b is not None:
            b.prev = b.next = None
            melds.append(_meld(a, b))
        else:
            melds.append(a)
    root = melds[-1]
    for h in reversed(melds[:-1]):
        root = _meld(root, h)
    return root


class MeldNeighborHeap:
    """Pairing heap + table representation.

    The table maps key -> heap node, standing in for the "pointer to the
    location" companion structure; union returns the overlap keys' merged
    values through fresh node insertions.
    """

    __slots__ = ("_root", "_tab")

    def __init__(self, items: Iterable[tuple[int, float]] = ()):
        self._root = None
        self._tab: dict[int, _PNode] = {}
        for k, p in items:
            self.insert(k, float(p))

    def __len__(self) -> int:
        return len(self._tab)

    def __contains__(self, key: int) -> bool:
        return key in self._tab

    def get(self, key: int) -> float | None:
        node = self._tab.get(key)
        return None if node is None else node.prio

    def insert(self, key: int, prio: float) -> None:
        if key in self._tab:
            raise KeyError(f"insert: key {key} already present")
        node = _PNode(key, prio)
        self._tab[key] = node
        self._root = node if self._root is None else _meld(self._root, node)

    def _remove_node(self, node) -> None:
        if node is self._root:
            self._root = _merge_pairs(node.child) if node.child is not None else None
            node.child = None
            return
        # unlink from sibling list
        if node.prev.child is node:
            node.prev.child = node.next
        else:
            node.prev.next = node.next
        if node.next is not None:
            node.next.prev = node.prev
        node.prev = node.next = None
        if node.child is not None:
            self._root = _meld(self._root, _merge_pairs(node.child))
            node.child = None

    def delete(self, key: int) -> float:
        node = self._tab.pop(key, None)
        if node is None:
            raise KeyError(f"delete: key {key} absent")
        self._remove_node(node)
        return node.prio

    def update(self, key: int, prio: float) -> None:
        if key not in self._tab:
            raise KeyError(f"update: key {key} absent")
        self.delete(key)
        self.insert(key, prio)

    def upsert(self, key: int, prio: float) -> None:
        if key in self._tab:
            self.delete(key)
        self.insert(key, prio)

    def best_edge(self) -> tuple[int, float]:
        if self._root is None:
            raise KeyError("best_edge on empty heap")
        return self._root.key, self._root.prio

    def union(self, other: "MeldNeighborHeap", combine: CombineFn) -> "MeldNeighborHeap":
        """Destructive on both operands; returns the merged heap."""
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        overlap = [(k, n) for k, n in small._tab.items() if k in large._tab]
        for key, snode in overlap:
            lnode = large._tab[key]
            merged = combine(lnode.prio, snode.prio)
            del small._tab[key]
            small._remove_node(snode)
            del large._tab[key]
            large._remove_node(lnode)
            large.insert(key, merged)
        large._tab.update(small._tab)
        if small._root is not None:
            large._root = (
                small._root if large._root is None else _meld(large._root, small._root)
            )
        small._tab = {}
        small._root = None
        return large

    def relabel(self, old_key: int, new_key: int, combine: CombineFn) -> None:
        prio = self.delete(old_key)
        ex = self.get(new_key)
        if ex is None:
            self.insert(new_key, prio)
        else:
            self.update(new_key, combine(ex, prio))

    def entries(self) -> Iterator[tuple[int, float]]:
        for k, node in self._tab.items():
            yield k, node.prio

    def keys(self) -> list[int]:
        return list(self._tab.keys())


NeighborHeap = TreeNeighborHeap | MeldNeighborHeap


def new_heap(impl: str, items: Iterable[tuple[int, float]] = ()) -> NeighborHeap:
    if impl == "tree":
        return TreeNeighborHeap(items)
    if impl == "meld":
        return MeldNeighborHeap(items)
    raise ValueError(f"unknown heap impl {impl!r}; expected one of {HEAP_IMPLS}")
