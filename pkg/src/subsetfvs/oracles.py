"""Reference algorithms and structural checkers used to validate the solver.

Everything here reaches the answer by a route independent of the dynamic
program: subset enumeration with a connectivity-based cycle test, a direct
contraction construction for crossing forests, and a semantic completion
check that compares tables against every possible far side.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .graphs import (
    BlockPartition,
    Graph,
    Instance,
    bits,
    components_masks,
    connected_components,
    contract_partial,
    contracted,
    is_forest,
    lex_key,
)
from .dp import IndexTuple, NodeContext, SolutionTable
from .layouts import mim_bipartite

BRUTE_LIMIT = 20


def _connected(g: Graph, inside: int, a: int, b: int) -> bool:
    """True when vertices a and b are joined inside the given vertex set."""
    if not (inside >> a) & 1 or not (inside >> b) & 1:
        return False
    seen = 1 << a
    frontier = seen
    while frontier:
        if (seen >> b) & 1:
            return True
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & inside & ~seen
        seen |= frontier
    return (seen >> b) & 1 == 1


def lies_on_cycle(g: Graph, x: int, v: int) -> bool:
    """Whether v lies on some cycle of the graph induced on x.

    Checks pairs of neighbors for a connection avoiding v; this is the
    independent route, used instead of the biconnectivity test.
    """
    nbrs = list(bits(g.adj[v] & x))
    inside = x & ~(1 << v)
    for i in range(len(nbrs)):
        for j in range(i + 1, len(nbrs)):
            if _connected(g, inside, nbrs[i], nbrs[j]):
                return True
    return False


def s_forest_by_cycles(g: Graph, x: int, s: int) -> bool:
    """S-forest test via per-vertex cycle membership."""
    return not any(lies_on_cycle(g, x, v) for v in bits(x & s))


def brute_force_sfvs(inst: Instance) -> Tuple[int, int]:
    """Exhaustive maximum-weight S-forest; ties to the lexicographically
    smallest vertex set.  Returns (weight, vertex mask)."""
    g, s = inst.graph, inst.s_set
    if g.n > BRUTE_LIMIT:
        raise ValueError("graph too large for exhaustive search")
    best: Optional[Tuple[int, Tuple[int, ...], int]] = None
    for mask in range(1 << g.n):
        if not s_forest_by_cycles(g, mask, s):
            continue
        cand = (-inst.weight_of(mask), lex_key(mask), mask)
        if best is None or cand < best:
            best = cand
    assert best is not None  # the empty set always qualifies
    return -best[0], best[2]


def brute_force_fvs(g: Graph, weights: Sequence[int]) -> Tuple[int, int]:
    """Exhaustive maximum-weight induced forest, with its own union-find
    acyclicity test."""
    if g.n > BRUTE_LIMIT:
        raise ValueError("graph too large for exhaustive search")
    best: Optional[Tuple[int, Tuple[int, ...], int]] = None
    for mask in range(1 << g.n):
        parent = list(range(g.n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        ok = True
        for u, v in g.edges():
            if (mask >> u) & 1 and (mask >> v) & 1:
                ru, rv = find(u), find(v)
                if ru == rv:
                    ok = False
                    break
                parent[ru] = rv
        if not ok:
            continue
        w = sum(weights[v] for v in bits(mask))
        cand = (-w, lex_key(mask), mask)
        if best is None or cand < best:
            best = cand
    assert best is not None
    return -best[0], best[2]


def sforest_table(inst: Instance) -> np.ndarray:
    """Boolean table over all vertex masks: entry m is True when the graph
    induced on m is an S-forest.  Sized 2**n, so only for small n."""
    from .graphs import is_s_forest

    g, s = inst.graph, inst.s_set
    if g.n > 22:
        raise ValueError("graph too large for a full subset table")
    flags = np.zeros(1 << g.n, dtype=bool)
    for mask in range(1 << g.n):
        flags[mask] = is_s_forest(g, mask, s)
    return flags


def check_represents(
    inst: Instance,
    vx: int,
    untrimmed: SolutionTable,
    reduced: SolutionTable,
    flags: Optional[np.ndarray] = None,
) -> bool:
    """Whether the reduced table preserves, for every subset of the far
    side, the best weight among members that complete to an S-forest.

    Also requires the reduced table to be a subset of the untrimmed one.
    """
    g = inst.graph
    outside = g.vertices & ~vx
    if outside.bit_count() > 12:
        raise ValueError("far side too large to enumerate")
    for m, w in reduced.solutions.items():
        if untrimmed.solutions.get(m) != w:
            return False
    if flags is None:
        flags = sforest_table(inst)

    out_bits = list(bits(outside))
    y_masks = np.zeros(1 << len(out_bits), dtype=np.int64)
    for k, v in enumerate(out_bits):
        y_masks[1 << k : 2 << k] = y_masks[: 1 << k] | (1 << v)

    def best_per_y(table: SolutionTable) -> np.ndarray:
        if not table.solutions:
            return np.full(len(y_masks), np.iinfo(np.int64).min, dtype=np.int64)
        xs = np.fromiter(table.solutions.keys(), dtype=np.int64, count=len(table.solutions))
        ws = np.fromiter(table.solutions.values(), dtype=np.int64, count=len(table.solutions))
        ok = flags[xs[:, None] | y_masks[None, :]]
        vals = np.where(ok, ws[:, None], np.iinfo(np.int64).min)
        return vals.max(axis=0)

    return bool(np.array_equal(best_per_y(untrimmed), best_per_y(reduced)))


def check_x2plus(g: Graph, x: int, y: int) -> bool:
    """On a forest split into sides x and y, at most 2 * mim(x, y) vertices
    of x can have two or more neighbors in y.  Returns whether that holds
    (the premise that the graph induced on x | y is a forest is assumed)."""
    heavy = sum(1 for v in bits(x) if (g.adj[v] & y).bit_count() >= 2)
    return heavy <= 2 * mim_bipartite(g, x, y)


def _full_blocks(g: Graph, s: int, x: int, y: int, p: BlockPartition) -> BlockPartition:
    """One partition holding both sides: x's components and S-singletons
    followed by y's blocks and S-singletons."""
    bx = contract_partial(x, connected_components(g, x & ~s), s)
    by = contract_partial(y, p, s)
    return BlockPartition(bx.blocks + by.blocks, bx.s_flags + by.s_flags)


def find_scontraction(g: Graph, s: int, x: int, y: int) -> BlockPartition:
    """Partition of y minus S whose contraction together with x's components
    turns the crossing structure into a forest.

    Requires the graph induced on x | y to be an S-forest.  Starts from the
    connected components of y minus S and repeatedly merges the blocks of a
    shortest cycle of the contracted graph; such cycles always pass through
    at least two mergeable blocks, so this terminates.
    """
    if x & y:
        raise ValueError("sides overlap")
    blocks = components_masks(g, y & ~s)
    while True:
        p = BlockPartition(tuple(blocks), (False,) * len(blocks))
        full = _full_blocks(g, s, x, y, p)
        bg = contracted(g, full, (), "full")
        cyc = _shortest_cycle(bg.graph)
        if cyc is None:
            return p
        cyc_masks = {full.blocks[c] for c in cyc}
        merged = 0
        rest = []
        for b in blocks:
            if b in cyc_masks:
                merged |= b
            else:
                rest.append(b)
        if merged == 0 or merged in blocks:
            raise AssertionError("contracted cycle without mergeable blocks")
        rest.append(merged)
        rest.sort(key=lambda m: m & -m)
        blocks = rest


def _shortest_cycle(g: Graph) -> Optional[List[int]]:
    """Vertex list of a shortest cycle, None in a forest.  Scans a BFS from
    every vertex and takes the best meeting of two branches."""
    best: Optional[List[int]] = None
    for root in range(g.n):
        parent = {root: -1}
        depth = {root: 0}
        order = [root]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            for v in bits(g.adj[u]):
                if v not in parent:
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    order.append(v)
                elif parent[u] != v and depth[v] >= depth[u]:
                    # non-tree edge: walk both endpoints up to the meet
                    pa, pb = u, v
                    trail_a, trail_b = [pa], [pb]
                    while depth[pa] > depth[pb]:
                        pa = parent[pa]
                        trail_a.append(pa)
                    while depth[pb] > depth[pa]:
                        pb = parent[pb]
                        trail_b.append(pb)
                    while pa != pb:
                        pa, pb = parent[pa], parent[pb]
                        trail_a.append(pa)
                        trail_b.append(pb)
                    cyc = trail_a + trail_b[:-1][::-1]
                    if len(set(cyc)) == len(cyc) and len(cyc) >= 3:
                        if best is None or len(cyc) < len(best):
                            best = cyc
        if best is not None and len(best) == 3:
            break
    return best


def scontraction_conditions(g: Graph, s: int, x: int, y: int, p: BlockPartition) -> bool:
    """The three guarantees of a valid contraction: the full block graph is
    a forest, every S-vertex of both sides sees each block at most once, and
    the extracted cover is small with pairwise distinct crossing
    neighborhoods (checked by extract_vertex_cover)."""
    full = _full_blocks(g, s, x, y, p)
    bg = contracted(g, full, (), "full")
    if not is_forest(bg.graph, bg.graph.vertices):
        return False
    for v in bits((x | y) & s):
        for b in full.blocks:
            if (g.adj[v] & b).bit_count() > 1:
                return False
    return True


def extract_vertex_cover(
    g: Graph, s: int, x: int, y: int, p: BlockPartition
) -> List[Tuple[str, int]]:
    """Vertex cover of the crossing block forest: blocks seeing two or more
    far blocks, plus one endpoint of every isolated crossing edge (the one
    whose smallest vertex is smaller).

    Returns (side tag, block mask) pairs; tags are "xn", "xs", "yn", "ys".
    The cover size is at most 4 * mim of the cut and all crossing
    neighborhoods are pairwise distinct.
    """
    bx = contract_partial(x, connected_components(g, x & ~s), s)
    by = contract_partial(y, p, s)
    xb = list(zip(bx.blocks, bx.s_flags))
    yb = list(zip(by.blocks, by.s_flags))

    def cross_nbrs(block: int, far: List[Tuple[int, bool]]) -> Tuple[int, ...]:
        ext = 0
        for v in bits(block):
            ext |= g.adj[v]
        return tuple(j for j, (fb, _) in enumerate(far) if ext & fb)

    x_adj = [cross_nbrs(b, yb) for b, _ in xb]
    y_adj = [cross_nbrs(b, xb) for b, _ in yb]

    cover: List[Tuple[str, int]] = []
    for i, (b, single) in enumerate(xb):
        if len(x_adj[i]) >= 2:
            cover.append(("xs" if single else "xn", b))
    for j, (b, single) in enumerate(yb):
        if len(y_adj[j]) >= 2:
            cover.append(("ys" if single else "yn", b))
    for i, (b, single) in enumerate(xb):
        if len(x_adj[i]) != 1:
            continue
        j = x_adj[i][0]
        if len(y_adj[j]) != 1:
            continue
        fb, fsingle = yb[j]
        if min(bits(b)) < min(bits(fb)):
            cover.append(("xs" if single else "xn", b))
        else:
            cover.append(("ys" if fsingle else "yn", fb))

    m = mim_bipartite(g, x, y)
    assert len(cover) <= 4 * m, "cover exceeds four times the matching bound"
    nbhds = []
    for tag, b in cover:
        ext = 0
        for v in bits(b):
            ext |= g.adj[v]
        nbhds.append(ext & (x if tag.startswith("y") else y))
    assert len(set(nbhds)) == len(nbhds), "cover neighborhoods collide"
    return cover


def build_index_from_cover(
    ctx: NodeContext, x: int, cover: List[Tuple[str, int]]
) -> IndexTuple:
    """Index induced by a crossing cover: near-side cover blocks become
    matched representatives, far-side ones the expected far sets, and the
    rest of the solution is summarized by its 1-neighbor representative."""
    xvc_ns, xvc_s, yvc_ns, yvc_s = set(), set(), set(), set()
    matched = 0
    for tag, b in cover:
        if tag == "xn":
            xvc_ns.add(ctx.fam_x2.rep_of(b))
            matched |= b
        elif tag == "xs":
            xvc_s.add(ctx.fam_x1.rep_of(b))
            matched |= b
        elif tag == "yn":
            yvc_ns.add(ctx.fam_y2.rep_of(b))
        else:
            yvc_s.add(ctx.fam_y1.rep_of(b))
    return IndexTuple(
        frozenset(xvc_ns),
        frozenset(xvc_s),
        ctx.fam_x1.rep_of(x & ~matched),
        frozenset(yvc_ns),
        frozenset(yvc_s),
    )


def is_complement_solution(
    inst: Instance,
    ctx: NodeContext,
    y: int,
    p: BlockPartition,
    i: IndexTuple,
) -> bool:
    """Far-side counterpart of the partial solution conditions: the index's
    far sets match blocks of y's contraction uniquely, the mirrored block
    graph is a forest, degree limits hold toward the near-side sets, and
    the unmatched remainder never touches the near rest."""
    g, s = inst.graph, inst.s_set
    if y & ~ctx.cvx:
        raise ValueError("far solution not within the far side")
    singles = list(bits(y & s))
    fam1, fam2 = ctx.fam_y1, ctx.fam_y2
    single_keys = [fam1.key_of(1 << q) for q in singles]
    block_keys = [fam2.key_of(b) for b in p.blocks]

    matched = 0
    for u in i.yvc_ns:
        key = fam2.key_of(u)
        hits = [j for j, k in enumerate(block_keys) if k == key]
        if len(hits) != 1:
            return False
        matched |= p.blocks[hits[0]]
    for u in i.yvc_s:
        key = fam1.key_of(u)
        hits = [j for j, k in enumerate(single_keys) if k == key]
        if len(hits) != 1:
            return False
        matched |= 1 << singles[hits[0]]

    by = contract_partial(y, p, s)
    far_blocks = [b for b in sorted(i.xvc_ns, key=lex_key) if b]
    far_flags = [False] * len(far_blocks)
    for b in sorted(i.xvc_s, key=lex_key):
        if b:
            far_blocks.append(b)
            far_flags.append(True)
    far = BlockPartition(tuple(far_blocks), tuple(far_flags)) if far_blocks else ()
    bg = contracted(g, by, far, "mixed")
    if not is_forest(bg.graph, bg.graph.vertices):
        return False

    for u in i.xvc_s:
        if u == 0:
            continue
        au = g.adj[u.bit_length() - 1]
        for b in p.blocks:
            if (au & b).bit_count() > 1:
                return False
    for q in singles:
        aq = g.adj[q]
        for u in i.xvc_ns:
            if (aq & u).bit_count() > 1:
                return False
        for b in p.blocks:
            if (aq & b).bit_count() > 1:
                return False

    rest_ext = 0
    for v in bits(i.x_rest):
        rest_ext |= g.adj[v]
    return not rest_ext & (y & ~matched)
