"""Canonical representatives of neighbor-count equivalence classes.

Two subsets X, Y of a side A are d-equivalent when every vertex u outside A
satisfies min(d, |X & N(u)|) == min(d, |Y & N(u)|).  The canonical
representative of a class is its smallest member, first by size, then by the
lexicographic order of the sorted vertex list.  Families are built by a
best-first search from the empty set that extends each found representative
by one vertex at a time; the visit order (size, then lex) is what makes the
first member found in each class canonical, so no post-hoc minimization is
done.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, Tuple

from .graphs import Graph, bits, lex_key


def neighbor_counts(g: Graph, a: int, d: int, x: int) -> Tuple[int, ...]:
    """min(d, |x & N(u)|) for each u outside a, in increasing id order."""
    if x & ~a:
        raise ValueError("x must be a subset of the side a")
    out = []
    for u in bits(g.vertices & ~a):
        c = (g.adj[u] & x).bit_count()
        out.append(c if c < d else d)
    return tuple(out)


def pack_counts(counts: Tuple[int, ...], d: int) -> int:
    """Pack a count vector into one base-(d+1) integer key."""
    key = 0
    for c in counts:
        key = key * (d + 1) + c
    return key


def same_class(g: Graph, a: int, d: int, x: int, y: int) -> bool:
    """Direct d-equivalence test over side a; no family required."""
    return neighbor_counts(g, a, d, x) == neighbor_counts(g, a, d, y)


@dataclass
class NecFamily:
    """All canonical representatives for one (side, d) pair.

    lookup maps a packed count key to the index of its representative in
    discovery order, which is exactly (size, lex) order.
    """

    graph: Graph
    side: int
    d: int
    outside: Tuple[int, ...]
    representatives: Tuple[int, ...]
    lookup: Dict[int, int]
    _rep_cache: Dict[int, int] = field(default_factory=dict, repr=False)

    @property
    def class_count(self) -> int:
        return len(self.representatives)

    def key_of(self, x: int) -> int:
        if x & ~self.side:
            raise ValueError("x must be a subset of the family side")
        adj = self.graph.adj
        d = self.d
        key = 0
        base = d + 1
        for u in self.outside:
            c = (adj[u] & x).bit_count()
            key = key * base + (c if c < d else d)
        return key

    def rep_of(self, x: int) -> int:
        """Canonical representative of the class of x."""
        cached = self._rep_cache.get(x)
        if cached is not None:
            return cached
        idx = self.lookup.get(self.key_of(x))
        if idx is None:
            raise RuntimeError("equivalence class missing from the family")
        rep = self.representatives[idx]
        self._rep_cache[x] = rep
        return rep


def compute_reps(g: Graph, a: int, d: int) -> NecFamily:
    """Build the representative family of side a for the d-equivalence.

    Search states carry clamped per-probe counts so a child key is derived
    in O(|outside|) from its parent.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if a & ~g.vertices:
        raise ValueError("side out of range")
    outside = tuple(bits(g.vertices & ~a))
    probe_adj = [g.adj[u] for u in outside]
    base = d + 1

    def packed(counts) -> int:
        key = 0
        for c in counts:
            key = key * base + c
        return key

    empty_counts = (0,) * len(outside)
    reps = []
    lookup: Dict[int, int] = {}
    heap = [(0, (), 0, empty_counts)]
    pushed = {0}
    while heap:
        size, _, mask, counts = heapq.heappop(heap)
        key = packed(counts)
        if key in lookup:
            continue
        lookup[key] = len(reps)
        reps.append(mask)
        rest = a & ~mask
        for v in bits(rest):
            child = mask | (1 << v)
            if child in pushed:
                continue
            pushed.add(child)
            vbit = 1 << v
            child_counts = tuple(
                c + 1 if (c < d and probe_adj[i] & vbit) else c
                for i, c in enumerate(counts)
            )
            heapq.heappush(heap, (size + 1, lex_key(child), child, child_counts))
    return NecFamily(g, a, d, outside, tuple(reps), lookup)
