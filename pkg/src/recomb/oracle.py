"""Exhaustive ground truth for small instances.

Enumerates all (k,s)-BCPs, builds the recombination configuration space,
answers reachability queries, and runs seeded random walks.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from .graphs import Graph, is_connected
from .partitions import (
    Partition,
    PartitionKey,
    RecombMove,
    SlackBound,
    canonical_key,
    enumerate_moves,
    partition_from_key,
    validate,
)

DEFAULT_VERTEX_CAP = 24
DEFAULT_NODE_CAP = 5_000_000


class OracleCapError(RuntimeError):
    """Instance too large for exhaustive treatment."""


def _node_cap() -> int:
    raw = os.environ.get("BCP_NODE_CAP")
    return int(raw) if raw else DEFAULT_NODE_CAP


@dataclass
class ConfigGraph:
    """The configuration space R_s(G,k) on partition keys."""

    nodes: list[PartitionKey]
    edges: list[tuple[int, int]]
    component: list[int]

    @property
    def component_count(self) -> int:
        return len(set(self.component)) if self.component else 0

    def index(self, key: PartitionKey) -> int:
        return self._index[key]

    def __post_init__(self):
        self._index = {key: i for i, key in enumerate(self.nodes)}
        self._adj: list[list[int]] = [[] for _ in self.nodes]
        for a, b in self.edges:
            self._adj[a].append(b)
            self._adj[b].append(a)

    def neighbors(self, i: int) -> list[int]:
        return self._adj[i]


@dataclass(frozen=True)
class SpaceStats:
    node_count: int
    edge_count: int
    component_count: int
    diameters: tuple[int, ...]  # per component, by component id order


@dataclass(frozen=True)
class WalkTrace:
    seed: int
    start_key: PartitionKey
    steps: tuple[tuple[int, PartitionKey], ...]  # (chosen move index, resulting key)
    halted_early: bool


def enumerate_partitions(
    g: Graph, k: int, slack: SlackBound, vertex_cap: int = DEFAULT_VERTEX_CAP
) -> list[Partition]:
    """All (k,s)-BCPs of g, one per unordered partition, sorted by key.

    Backtracking over vertices in id order with size-feasibility and
    connectability pruning.
    """
    n = g.n
    if n > vertex_cap:
        raise OracleCapError(f"n={n} exceeds the oracle vertex cap {vertex_cap}")
    if k < 1 or k > n:
        return []
    m_min = slack.min_size(n, k)
    m_max = slack.max_size(n, k)
    if m_min > m_max:
        return []
    out: list[Partition] = []
    assign = [-1] * n
    sizes = [0] * k

    def connectable(used: int, next_v: int) -> bool:
        # Every currently-disconnected piece of a district must still be able
        # to attach through an unassigned vertex.
        for d in range(used):
            members = [v for v in range(next_v) if assign[v] == d]
            remaining = set(members)
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
                comps.append(seen)
                remaining -= seen
            if len(comps) > 1:
                for comp in comps:
                    if not any(w >= next_v for u in comp for w in g.adj[u]):
                        return False
        return True

    def rec(v: int, used: int):
        if v == n:
            if used != k:
                return
            if any(sizes[d] < m_min for d in range(k)):
                return
            districts = [frozenset(x for x in range(n) if assign[x] == d) for d in range(k)]
            if all(is_connected(g, d) for d in districts):
                out.append(Partition(tuple(districts)))
            return
        remaining = n - v
        for d in range(min(used + 1, k)):
            if d < used and sizes[d] >= m_max:
                continue
            new_used = max(used, d + 1)
            sizes[d] += 1
            assign[v] = d
            deficit = sum(max(0, m_min - sizes[x]) for x in range(new_used))
            deficit += (k - new_used) * m_min
            if deficit <= remaining - 1 and connectable(new_used, v + 1):
                rec(v + 1, new_used)
            sizes[d] -= 1
            assign[v] = -1

    rec(0, 0)
    out.sort(key=canonical_key)
    return out


def build_space(g: Graph, k: int, slack: SlackBound, vertex_cap: int = DEFAULT_VERTEX_CAP) -> ConfigGraph:
    """The full configuration space with components labeled by union-find."""
    parts = enumerate_partitions(g, k, slack, vertex_cap)
    if len(parts) > _node_cap():
        raise OracleCapError("instance too large: node cap exceeded")
    nodes = [canonical_key(p) for p in parts]
    index = {key: i for i, key in enumerate(nodes)}
    edges = set()
    for i, p in enumerate(parts):
        for m in enumerate_moves(g, p, slack):
            q = p.replace(m.i, m.j, m.new_i, m.new_j)
            j = index[canonical_key(q)]
            if i != j:
                edges.add((min(i, j), max(i, j)))
    comp = list(range(len(nodes)))

    def find(x: int) -> int:
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for a, b in edges:
        comp[find(a)] = find(b)
    roots = sorted({find(i) for i in range(len(nodes))})
    label = {r: i for i, r in enumerate(roots)}
    return ConfigGraph(nodes, sorted(edges), [label[find(i)] for i in range(len(nodes))])


def decide_br(
    g: Graph,
    k: int,
    slack: SlackBound,
    pa: Partition,
    pb: Partition,
    pairs=None,
    max_depth: Optional[int] = None,
    visit_hook=None,
) -> tuple[bool, Optional[list[RecombMove]]]:
    """BFS in R_s(G,k) from pa; returns (reachable, shortest move path).

    The search is lazy: only pa's component is expanded.  `pairs` restricts
    moves to the given district pairs, `max_depth` bounds the search radius,
    and `visit_hook` is called with each visited Partition (ground-truth
    invariant checks in the test-suite hang off it).
    """
    for name, p in (("from", pa), ("to", pb)):
        rep = validate(g, p, k, slack)
        if not rep.ok:
            raise ValueError(f"invalid '{name}' partition: {'; '.join(rep.violations)}")
    target = canonical_key(pb)
    start = canonical_key(pa)
    if visit_hook:
        visit_hook(pa)
    if start == target:
        return True, []
    cap = _node_cap()
    parent: dict[PartitionKey, tuple[PartitionKey, RecombMove]] = {}
    depth = {start: 0}
    # Carry labeled partitions through the search: canonical keys reorder
    # districts, which would break label-based `pairs` restrictions.
    frontier: list[tuple[PartitionKey, Partition]] = [(start, pa)]
    while frontier:
        next_frontier = []
        for key, p in frontier:
            if max_depth is not None and depth[key] >= max_depth:
                continue
            for m in enumerate_moves(g, p, slack, pairs=pairs):
                q = p.replace(m.i, m.j, m.new_i, m.new_j)
                qkey = canonical_key(q)
                if qkey in depth:
                    continue
                if len(depth) >= cap:
                    raise OracleCapError("instance too large: node cap exceeded")
                depth[qkey] = depth[key] + 1
                parent[qkey] = (key, m)
                if visit_hook:
                    visit_hook(q)
                if qkey == target:
                    path = []
                    cur = qkey
                    while cur != start:
                        prev, mv = parent[cur]
                        path.append(mv)
                        cur = prev
                    path.reverse()
                    return True, path
                next_frontier.append((qkey, q))
        frontier = next_frontier
    return False, None


def space_stats(cg: ConfigGraph) -> SpaceStats:
    """Exact node/edge/component counts and per-component diameters."""
    ncomp = cg.component_count
    diam = [0] * ncomp
    for src in range(len(cg.nodes)):
        dist = {src: 0}
        frontier = [src]
        far = 0
        while frontier:
            nxt = []
            for u in frontier:
                for w in cg.neighbors(u):
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        far = max(far, dist[w])
                        nxt.append(w)
            frontier = nxt
        c = cg.component[src]
        diam[c] = max(diam[c], far)
    return SpaceStats(len(cg.nodes), len(cg.edges), ncomp, tuple(diam))


def _splitmix64(state: int):
    """SplitMix64: the documented PRNG behind recom_walk traces."""
    while True:
        state = (state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        yield z ^ (z >> 31)


def recom_walk(
    g: Graph, k: int, slack: SlackBound, start: Partition, steps: int, seed: int
) -> WalkTrace:
    """Seeded uniform random walk over recombination moves.

    At each step the applicable moves are enumerated in their deterministic
    order and one is picked by SplitMix64 output modulo the move count; the
    same seed therefore always reproduces the same trace.
    """
    rep = validate(g, start, k, slack)
    if not rep.ok:
        raise ValueError(f"invalid start partition: {'; '.join(rep.violations)}")
    rng = _splitmix64(seed & 0xFFFFFFFFFFFFFFFF)
    cur = start
    trace: list[tuple[int, PartitionKey]] = []
    halted = False
    for _ in range(steps):
        moves = enumerate_moves(g, cur, slack)
        if not moves:
            halted = True
            break
        idx = next(rng) % len(moves)
        m = moves[idx]
        cur = cur.replace(m.i, m.j, m.new_i, m.new_j)
        trace.append((idx, canonical_key(cur)))
    return WalkTrace(seed, canonical_key(start), tuple(trace), halted)
