"""Rooted binary layouts over a graph and their cut functions.

A layout is a rooted binary tree whose leaves are exactly the graph's
vertices; the subtree below a node x induces the cut (V_x, complement).
Three cut values are supported: GF(2) rank and rational rank of the
cross-adjacency matrix, and the maximum induced matching size of the
crossing bipartite graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .graphs import Graph, bits, mask_of


@dataclass(frozen=True)
class RootedLayout:
    """Rooted binary tree; node ids are postorder positions, root last.

    left/right hold child node ids (-1 on leaves); leaf_vertex holds the
    graph vertex of each leaf (-1 on internal nodes); below[x] is the
    bitmask of vertices under x.
    """

    n: int
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    leaf_vertex: Tuple[int, ...]
    below: Tuple[int, ...]

    @property
    def node_count(self) -> int:
        return len(self.left)

    @property
    def root(self) -> int:
        return len(self.left) - 1

    def is_leaf(self, x: int) -> bool:
        return self.left[x] < 0

    def nodes(self) -> range:
        return range(len(self.left))

    def postorder(self) -> range:
        return range(len(self.left))


class _LayoutBuilder:
    def __init__(self):
        self.left: List[int] = []
        self.right: List[int] = []
        self.leaf_vertex: List[int] = []
        self.below: List[int] = []

    def leaf(self, v: int) -> int:
        self.left.append(-1)
        self.right.append(-1)
        self.leaf_vertex.append(v)
        self.below.append(1 << v)
        return len(self.left) - 1

    def join(self, a: int, b: int) -> int:
        self.left.append(a)
        self.right.append(b)
        self.leaf_vertex.append(-1)
        self.below.append(self.below[a] | self.below[b])
        return len(self.left) - 1

    def finish(self, n: int) -> RootedLayout:
        lay = RootedLayout(
            n,
            tuple(self.left),
            tuple(self.right),
            tuple(self.leaf_vertex),
            tuple(self.below),
        )
        if lay.below[lay.root] != (1 << n) - 1:
            raise ValueError("layout leaves do not cover the vertex set")
        return lay


def vertex_set_below(layout: RootedLayout, x: int) -> int:
    if not 0 <= x < layout.node_count:
        raise ValueError(f"unknown node id {x}")
    return layout.below[x]


def layout_from_order(order: Sequence[int]) -> RootedLayout:
    """Left-deep caterpillar layout: order[0],order[1] join deepest, each
    later vertex hangs off as a right leaf."""
    order = list(order)
    n = len(order)
    if n == 0:
        raise ValueError("empty layout order")
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of 0..n-1")
    b = _LayoutBuilder()
    node = b.leaf(order[0])
    for v in order[1:]:
        node = b.join(node, b.leaf(v))
    return b.finish(n)


def gf2_rank(rows: List[int]) -> int:
    """Rank over GF(2) of 0/1 rows packed as bitmask ints."""
    rank = 0
    basis: List[int] = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
            rank += 1
    return rank


def _rational_rank(rows: List[List[int]]) -> int:
    mat = [[Fraction(v) for v in row] for row in rows if any(row)]
    if not mat:
        return 0
    cols = len(mat[0])
    rank = 0
    row_i = 0
    for col in range(cols):
        pivot = None
        for r in range(row_i, len(mat)):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        mat[row_i], mat[pivot] = mat[pivot], mat[row_i]
        pv = mat[row_i][col]
        for r in range(len(mat)):
            if r != row_i and mat[r][col] != 0:
                factor = mat[r][col] / pv
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[row_i])]
        row_i += 1
        rank += 1
        if row_i == len(mat):
            break
    return rank


def cut_rank(g: Graph, a: int, field: str = "gf2") -> int:
    """Rank of the cross-adjacency matrix rows(a) x cols(complement)."""
    comp = g.vertices & ~a
    if field == "gf2":
        rows = []
        for v in bits(a):
            packed = 0
            for j, u in enumerate(bits(comp)):
                if g.adj[v] >> u & 1:
                    packed |= 1 << j
            rows.append(packed)
        return gf2_rank(rows)
    if field == "rational":
        cols = list(bits(comp))
        rows = [[g.adj[v] >> u & 1 for u in cols] for v in bits(a)]
        return _rational_rank(rows)
    raise ValueError(f"unknown field {field!r}")


def _matching_number(edges: List[Tuple[int, int]], available: int) -> int:
    """Maximum matching size of the bipartite graph formed by the listed
    cut edges restricted to the available edge subset."""
    right_of: Dict[int, List[int]] = {}
    for i, (u, v) in enumerate(edges):
        if available >> i & 1:
            right_of.setdefault(u, []).append(v)
    match: Dict[int, int] = {}

    def try_augment(u: int, seen: set) -> bool:
        for v in right_of.get(u, ()):
            if v in seen:
                continue
            seen.add(v)
            if v not in match or try_augment(match[v], seen):
                match[v] = u
                return True
        return False

    size = 0
    for u in right_of:
        if try_augment(u, set()):
            size += 1
    return size


def _mim_exact(edges: List[Tuple[int, int]], conflict: List[int]) -> int:
    """Maximum induced matching by branch-and-bound over the edge list.

    Branches on the lexicographically first remaining edge; prunes with the
    matching number of the remaining edges (an upper bound on the induced
    matching size), memoized per remaining edge set.
    """
    if not edges:
        return 0
    bound_cache: Dict[int, int] = {}
    best = 0

    def bound(avail: int) -> int:
        b = bound_cache.get(avail)
        if b is None:
            b = _matching_number(edges, avail)
            bound_cache[avail] = b
        return b

    ceiling = bound((1 << len(edges)) - 1)

    def walk(avail: int, count: int):
        nonlocal best
        if count > best:
            best = count
        if not avail or best == ceiling:
            return
        free = True
        rest = avail
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            if conflict[i] & avail:
                free = False
                break
            rest ^= low
        if free:
            total = count + avail.bit_count()
            if total > best:
                best = total
            return
        if count + bound(avail) <= best:
            return
        low = avail & -avail
        i = low.bit_length() - 1
        walk(avail & ~(conflict[i] | low), count + 1)
        walk(avail ^ low, count)

    walk((1 << len(edges)) - 1, 0)
    return best


def mim_bipartite(g: Graph, a: int, b: int) -> int:
    """Exact maximum induced matching of the bipartite graph G[a, b]."""
    if a & b:
        raise ValueError("sides overlap")
    edges = []
    for u in bits(a):
        for v in bits(g.adj[u] & b):
            edges.append((u, v))
    conflict = [0] * len(edges)
    for i in range(len(edges)):
        u1, v1 = edges[i]
        for j in range(i + 1, len(edges)):
            u2, v2 = edges[j]
            if (
                u1 == u2
                or v1 == v2
                or g.adj[u1] >> v2 & 1
                or g.adj[u2] >> v1 & 1
            ):
                conflict[i] |= 1 << j
                conflict[j] |= 1 << i
    return _mim_exact(edges, conflict)


def mim_cut(g: Graph, a: int) -> int:
    return mim_bipartite(g, a, g.vertices & ~a)


@dataclass(frozen=True)
class CutReport:
    """Per-node cut values for one cut function, indexed by node id."""

    kind: str
    below: Tuple[int, ...]
    values: Tuple[int, ...]


def width(g: Graph, layout: RootedLayout, kind: str = "gf2") -> Tuple[int, CutReport]:
    """Maximum cut value over all layout nodes plus the per-node report."""
    if layout.n != g.n:
        raise ValueError("layout and graph disagree on the vertex count")
    values = []
    for x in layout.nodes():
        a = layout.below[x]
        if kind == "mim":
            values.append(mim_cut(g, a))
        elif kind in ("gf2", "rational"):
            values.append(cut_rank(g, a, kind))
        else:
            raise ValueError(f"unknown cut kind {kind!r}")
    return max(values), CutReport(kind, layout.below, tuple(values))


def distinct_external_neighborhoods(g: Graph, a: int) -> int:
    """Number of distinct rows of the cross-adjacency matrix of a."""
    comp = g.vertices & ~a
    return len({g.adj[v] & comp for v in bits(a)})


def intervals_intersect(p: Tuple[int, int], q: Tuple[int, int]) -> bool:
    return p[0] <= q[1] and q[0] <= p[1]


def interval_layout(intervals: Sequence[Tuple[int, int]], g: Graph) -> RootedLayout:
    """Caterpillar layout by left endpoint for an interval model of g.

    The model must reproduce g's adjacency exactly (closed intervals,
    touching endpoints intersect).  Every cut of the returned layout has
    induced-matching value at most 1; this is asserted at build time.
    """
    if len(intervals) != g.n:
        raise ValueError("interval count does not match the vertex count")
    for l, r in intervals:
        if l > r:
            raise ValueError(f"bad interval [{l},{r}]")
    for u in range(g.n):
        for v in range(u + 1, g.n):
            expect = intervals_intersect(intervals[u], intervals[v])
            if expect != g.has_edge(u, v):
                raise ValueError(
                    f"interval model disagrees with adjacency on ({u},{v})"
                )
    order = sorted(range(g.n), key=lambda v: (intervals[v][0], intervals[v][1], v))
    layout = layout_from_order(order)
    for x in layout.nodes():
        if mim_cut(g, layout.below[x]) > 1:
            raise AssertionError("interval layout produced a cut above width 1")
    return layout


def serialize_layout(layout: RootedLayout, names: Sequence[str]) -> str:
    """Canonical nested-parentheses form with no whitespace."""
    if len(names) != layout.n:
        raise ValueError("name table length mismatch")

    def render(x: int) -> str:
        if layout.is_leaf(x):
            return names[layout.leaf_vertex[x]]
        return f"({render(layout.left[x])},{render(layout.right[x])})"

    return render(layout.root)


def parse_layout(text: str, names: Sequence[str]) -> RootedLayout:
    """Parse the nested-parentheses layout form; leaves are vertex names."""
    ids = {name: i for i, name in enumerate(names)}
    if len(ids) != len(names):
        raise ValueError("duplicate vertex names")
    s = "".join(text.split())
    if not s:
        raise ValueError("empty layout text")
    pos = 0
    used = set()
    b = _LayoutBuilder()

    def parse_node() -> int:
        nonlocal pos
        if pos < len(s) and s[pos] == "(":
            pos += 1
            a = parse_node()
            if pos >= len(s) or s[pos] != ",":
                raise ValueError(f"expected ',' at position {pos}")
            pos += 1
            c = parse_node()
            if pos >= len(s) or s[pos] != ")":
                raise ValueError(f"expected ')' at position {pos}")
            pos += 1
            return b.join(a, c)
        start = pos
        while pos < len(s) and s[pos] not in "(),":
            pos += 1
        name = s[start:pos]
        if not name:
            raise ValueError(f"expected a vertex name at position {start}")
        if name not in ids:
            raise ValueError(f"unknown vertex name {name!r}")
        v = ids[name]
        if v in used:
            raise ValueError(f"vertex {name!r} appears twice")
        used.add(v)
        return b.leaf(v)

    parse_node()
    if pos != len(s):
        raise ValueError(f"trailing characters at position {pos}")
    if len(used) != len(names):
        raise ValueError("layout does not cover every vertex")
    return b.finish(len(names))
