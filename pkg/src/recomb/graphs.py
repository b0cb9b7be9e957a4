"""Undirected simple graphs: connectivity, block-cut decomposition, spanning trees.

Vertices are always 0..n-1.  All functions are pure; Graph and Tree are
immutable once constructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Raised on malformed graph files; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Graph:
    """Undirected simple graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("negative vertex count")
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            norm.add((min(u, v), max(u, v)))
        self.n = n
        self.edges = frozenset(norm)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def vertices(self) -> frozenset[int]:
        return frozenset(range(self.n))

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class Tree:
    """A tree on a subset of an ambient graph's vertices.

    parent maps every vertex to its parent (root maps to itself); the root is
    the smallest vertex id.
    """

    vertices: frozenset[int]
    root: int
    parent: dict[int, int] = field(compare=False)
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        assert len(self.edges) == len(self.vertices) - 1

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)


@dataclass(frozen=True)
class BlockCutDecomposition:
    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    block_vertices: frozenset[int]


def is_connected(g: Graph, s: frozenset[int] | set[int]) -> bool:
    """True iff the subgraph induced by s is connected.  s must be nonempty."""
    if not s:
        raise ValueError("empty subset")
    s = frozenset(s)
    start = min(s)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w in s and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(s)


def connected_components(g: Graph, s: Iterable[int]) -> list[frozenset[int]]:
    """Maximal connected pieces of G[s], sorted by their minimum element."""
    remaining = set(s)
    comps = []
    while remaining:
        start = min(remaining)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w in remaining and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(frozenset(seen))
        remaining -= seen
    return sorted(comps, key=min)


def block_cut(g: Graph) -> BlockCutDecomposition:
    """Blocks (maximal biconnected components) and cut vertices of a connected graph.

    Iterative DFS lowpoint computation; blocks are reported sorted by their
    minimum vertex.
    """
    if g.n == 0:
        raise ValueError("graph not connected")
    if not is_connected(g, g.vertices()):
        raise ValueError("graph not connected")
    if g.n == 1:
        return BlockCutDecomposition((frozenset({0}),), frozenset(), frozenset({0}))

    disc = [-1] * g.n
    low = [0] * g.n
    parent = [-1] * g.n
    cut = set()
    blocks: list[frozenset[int]] = []
    edge_stack: list[tuple[int, int]] = []
    timer = 0

    # Explicit stack: (vertex, iterator index into adjacency).
    for root in range(g.n):
        if disc[root] != -1:
            continue
        stack = [(root, 0)]
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        while stack:
            u, i = stack.pop()
            if i < len(g.adj[u]):
                stack.append((u, i + 1))
                w = g.adj[u][i]
                if disc[w] == -1:
                    parent[w] = u
                    edge_stack.append((u, w))
                    if u == root:
                        root_children += 1
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, 0))
                elif w != parent[u] and disc[w] < disc[u]:
                    edge_stack.append((u, w))
                    low[u] = min(low[u], disc[w])
            else:
                p = parent[u]
                if p != -1:
                    low[p] = min(low[p], low[u])
                    if low[u] >= disc[p]:
                        # Pop the block containing tree edge (p, u): everything
                        # pushed after it belongs to u's subtree.
                        blk = set()
                        while True:
                            a, b = edge_stack.pop()
                            blk.add(a)
                            blk.add(b)
                            if (a, b) == (p, u):
                                break
                        blocks.append(frozenset(blk))
                        if p != root:
                            cut.add(p)
        if root_children >= 2:
            cut.add(root)

    blocks.sort(key=min)
    block_vs = frozenset(range(g.n)) - frozenset(cut)
    return BlockCutDecomposition(tuple(blocks), frozenset(cut), block_vs)


def find_low_degree_block_vertex(g: Graph) -> int:
    """The block vertex of minimum degree (smallest id on ties).

    When g is the union of two forests this degree is at most 3.
    """
    dec = block_cut(g)
    return min(dec.block_vertices, key=lambda v: (g.degree(v), v))


def spanning_tree(g: Graph, s: Iterable[int]) -> Tree:
    """BFS spanning tree of G[s] rooted at min(s); neighbors visited ascending."""
    s = frozenset(s)
    if not s:
        raise ValueError("empty subset")
    root = min(s)
    parent = {root: root}
    order = [root]
    head = 0
    edges = set()
    while head < len(order):
        u = order[head]
        head += 1
        for w in g.adj[u]:
            if w in s and w not in parent:
                parent[w] = u
                edges.add((min(u, w), max(u, w)))
                order.append(w)
    if len(parent) != len(s):
        raise ValueError("induced subgraph not connected")
    return Tree(s, root, parent, frozenset(edges))


def _tree_from_edges(vertices: frozenset[int], edges: frozenset[tuple[int, int]]) -> Tree:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    root = min(vertices)
    parent = {root: root}
    order = [root]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for w in sorted(adj[u]):
            if w not in parent:
                parent[w] = u
                order.append(w)
    if len(parent) != len(vertices):
        raise ValueError("edge set does not form a connected tree")
    return Tree(vertices, root, parent, edges)


def augment_forest(g: Graph, forest: Sequence[Tree]) -> Tree:
    """Augment a spanning forest of g to a spanning tree.

    Adds exactly (#components - 1) cross edges; at each union step the
    lexicographically smallest connecting edge is chosen.
    """
    covered: set[int] = set()
    edges: set[tuple[int, int]] = set()
    for t in forest:
        covered |= t.vertices
        for e in t.edges:
            if e not in g.edges:
                raise ValueError(f"forest edge {e} not in graph")
            edges.add(e)
    if covered != set(range(g.n)):
        raise ValueError("forest does not span the graph")

    comp = list(range(g.n))

    def find(x: int) -> int:
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for a, b in edges:
        comp[find(a)] = find(b)
    ncomp = len({find(v) for v in range(g.n)})
    candidates = sorted(g.edges - edges)
    while ncomp > 1:
        for a, b in candidates:
            ra, rb = find(a), find(b)
            if ra != rb:
                comp[ra] = rb
                edges.add((a, b))
                ncomp -= 1
                break
        else:
            raise ValueError("graph not connected")
    return _tree_from_edges(frozenset(range(g.n)), frozenset(edges))


def tree_center(t: Tree) -> int:
    """A center of t: every component of T-v has at most |V(T)|/2 vertices.

    Smallest id when several centers exist.
    """
    nt = len(t.vertices)
    if nt == 1:
        return t.root
    adj: dict[int, list[int]] = {v: [] for v in t.vertices}
    for a, b in t.edges:
        adj[a].append(b)
        adj[b].append(a)
    # Subtree sizes from a DFS rooted at t.root.
    order = []
    parent = {t.root: None}
    stack = [t.root]
    while stack:
        u = stack.pop()
        order.append(u)
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                stack.append(w)
    size = {v: 1 for v in t.vertices}
    for u in reversed(order):
        if parent[u] is not None:
            size[parent[u]] += size[u]
    best = None
    for v in sorted(t.vertices):
        worst = 0
        for w in adj[v]:
            c = size[w] if parent[w] == v else nt - size[v]
            worst = max(worst, c)
        if best is None or worst < best[0]:
            best = (worst, v)
    assert best is not None and 2 * best[0] <= nt
    return best[1]


def parse_graph(text: str) -> Graph:
    """Parse the `p <n> <m>` / `e <u> <v>` text format."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GraphFormatError(1, "empty file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "p":
        raise GraphFormatError(1, "expected 'p <n> <m>'")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise GraphFormatError(1, "non-integer counts") from None
    if n < 0 or m < 0:
        raise GraphFormatError(1, "negative counts")
    if len(lines) - 1 != m:
        raise GraphFormatError(len(lines), f"expected {m} edge lines, got {len(lines) - 1}")
    edges = []
    seen = set()
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3 or parts[0] != "e":
            raise GraphFormatError(i, "expected 'e <u> <v>'")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphFormatError(i, "non-integer endpoint") from None
        if not (0 <= u < v < n):
            raise GraphFormatError(i, f"require 0 <= u < v < n, got ({u},{v})")
        if (u, v) in seen:
            raise GraphFormatError(i, f"duplicate edge ({u},{v})")
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    out = [f"p {g.n} {len(g.edges)}"]
    for u, v in sorted(g.edges):
        out.append(f"e {u} {v}")
    return "\n".join(out) + "\n"
