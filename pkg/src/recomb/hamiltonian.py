"""Reconfiguration along a Hamilton cycle with slack s >= n/k.

Noncanonical partitions are "defragmented" until every district is a single
arc of the cycle, and canonical partitions are rebalanced and cyclically
shifted into each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .graphs import Graph, Tree, tree_center
from .partitions import Partition, RecombMove, SlackBound, apply_move, canonical_key, validate
from .sequences import AbstractMove, abstract_of, inverted_abstract, resolve_moves


@dataclass(frozen=True)
class CycleOrder:
    """A Hamilton cycle given as a cyclic vertex order."""

    order: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.order)

    def positions(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def check(self, g: Graph) -> None:
        if sorted(self.order) != list(range(g.n)):
            raise ValueError("cycle order is not a permutation of the vertices")
        for i, u in enumerate(self.order):
            w = self.order[(i + 1) % self.n]
            if not g.has_edge(u, w):
                raise ValueError(f"cycle step ({u},{w}) is not an edge of the graph")


@dataclass(frozen=True)
class Fragment:
    """Maximal run of one district's vertices that is contiguous along C."""

    district: int
    start: int
    length: int

    def vertex_set(self, cycle: CycleOrder) -> frozenset[int]:
        n = cycle.n
        return frozenset(cycle.order[(self.start + i) % n] for i in range(self.length))


@dataclass(frozen=True)
class FragmentTree:
    """Minimum-chord spanning tree of one district plus its fragment structure."""

    district: int
    tree: Tree
    chords: frozenset[tuple[int, int]]
    center: int
    fragments: tuple[Fragment, ...]  # this district's fragments, cyclic order
    heavy: int  # index into fragments
    parent: dict[int, Optional[int]]  # fragment index -> parent fragment index
    subtree_weight: dict[int, int]  # fragment index -> vertices in its subtree

    def is_light(self, idx: int) -> bool:
        return idx != self.heavy


def fragments_of(cycle: CycleOrder, p: Partition) -> list[Fragment]:
    """All fragments of all districts, in cyclic order along C."""
    n = cycle.n
    dist_at = [p.district_of(v) for v in cycle.order]
    start = None
    for t in range(n):
        if dist_at[t] != dist_at[t - 1]:
            start = t
            break
    if start is None:
        return [Fragment(dist_at[0], 0, n)]
    frags = []
    t = start
    while True:
        d = dist_at[t]
        length = 1
        while dist_at[(t + length) % n] == d and length < n:
            length += 1
        frags.append(Fragment(d, t, length))
        t = (t + length) % n
        if t == start:
            break
    return frags


def fragment_count(cycle: CycleOrder, p: Partition) -> int:
    return len(fragments_of(cycle, p))


def _district_tree(g: Graph, cycle: CycleOrder, p: Partition, i: int):
    """Spanning tree edges of district i using cycle edges inside fragments
    plus the minimum number of chords (lexicographically chosen)."""
    members = p.districts[i]
    n = cycle.n
    pos = cycle.positions()
    edges: set[tuple[int, int]] = set()
    for v in members:
        w = cycle.order[(pos[v] + 1) % n]
        if w in members and n > 1:
            edges.add((min(v, w), max(v, w)))
    # Cycle edges inside a single district covering the whole cycle would form
    # a cycle; drop one edge in that degenerate k=1 case.
    if len(edges) == len(members) and edges:
        edges.discard(max(edges))
    comp = {v: v for v in members}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for a, b in edges:
        comp[find(a)] = find(b)
    chords = []
    candidates = sorted(
        e for e in g.edges if e[0] in members and e[1] in members and e not in edges
    )
    for a, b in candidates:
        ra, rb = find(a), find(b)
        if ra != rb:
            comp[ra] = rb
            edges.add((a, b))
            chords.append((a, b))
    if len({find(v) for v in members}) != 1:
        raise ValueError(f"district {i} is not connected")
    return edges, frozenset(chords)


def build_fragment_tree(g: Graph, cycle: CycleOrder, p: Partition, i: int) -> FragmentTree:
    members = p.districts[i]
    edges, chords = _district_tree(g, cycle, p, i)
    from .graphs import _tree_from_edges

    tree = _tree_from_edges(frozenset(members), frozenset(edges))
    center = tree_center(tree)
    frags = tuple(f for f in fragments_of(cycle, p) if f.district == i)
    frag_sets = [f.vertex_set(cycle) for f in frags]

    def frag_of(v: int) -> int:
        for idx, s in enumerate(frag_sets):
            if v in s:
                return idx
        raise KeyError(v)

    heavy = frag_of(center)
    # Fragment-level tree induced by the chosen chords.
    fadj: dict[int, set[int]] = {idx: set() for idx in range(len(frags))}
    for a, b in chords:
        fa, fb = frag_of(a), frag_of(b)
        fadj[fa].add(fb)
        fadj[fb].add(fa)
    parent: dict[int, Optional[int]] = {heavy: None}
    order = [heavy]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for w in sorted(fadj[u]):
            if w not in parent:
                parent[w] = u
                order.append(w)
    assert len(parent) == len(frags)
    weight = {idx: frags[idx].length for idx in range(len(frags))}
    for u in reversed(order):
        if parent[u] is not None:
            weight[parent[u]] += weight[u]
    return FragmentTree(i, tree, chords, center, frags, heavy, parent, weight)


def _subtree_vertices(ft: FragmentTree, cycle: CycleOrder, idx: int) -> frozenset[int]:
    """Vertices of a fragment and all its descendants."""
    children: dict[int, list[int]] = {i: [] for i in range(len(ft.fragments))}
    for c, par in ft.parent.items():
        if par is not None:
            children[par].append(c)
    out: set[int] = set()
    stack = [idx]
    while stack:
        u = stack.pop()
        out |= ft.fragments[u].vertex_set(cycle)
        stack.extend(children[u])
    return frozenset(out)


def _is_large(n: int, k: int, size: int) -> bool:
    return k * size > n


def _move_for(p: Partition, da: int, db: int, part_a: frozenset, part_b: frozenset) -> RecombMove:
    if da < db:
        return RecombMove(da, db, part_a, part_b)
    return RecombMove(db, da, part_b, part_a)


def step_light(g: Graph, cycle: CycleOrder, p: Partition, slack: SlackBound) -> Optional[RecombMove]:
    """A move shedding a light fragment of a large district into an adjacent
    small district, when one exists; scans cycle positions ascending."""
    n, k = cycle.n, p.k
    trees: dict[int, FragmentTree] = {}
    for pos in range(n):
        u = cycle.order[pos]
        w = cycle.order[(pos + 1) % n]
        du, dw = p.district_of(u), p.district_of(w)
        if du == dw:
            continue
        for donor_v, donor_d, recv_d in ((u, du, dw), (w, dw, du)):
            if not _is_large(n, k, len(p.districts[donor_d])):
                continue
            if _is_large(n, k, len(p.districts[recv_d])):
                continue
            if donor_d not in trees:
                trees[donor_d] = build_fragment_tree(g, cycle, p, donor_d)
            ft = trees[donor_d]
            idx = next(
                i for i, f in enumerate(ft.fragments) if donor_v in f.vertex_set(cycle)
            )
            if not ft.is_light(idx):
                continue
            shed = _subtree_vertices(ft, cycle, idx)
            part_donor = p.districts[donor_d] - shed
            part_recv = p.districts[recv_d] | shed
            return _move_for(p, donor_d, recv_d, part_donor, part_recv)
    return None


def find_small_adjacent_pair(cycle: CycleOrder, p: Partition) -> tuple[int, int]:
    """First pair of districts adjacent along C with combined size <= 2n/k."""
    n, k = cycle.n, p.k
    for pos in range(n):
        u = cycle.order[pos]
        w = cycle.order[(pos + 1) % n]
        du, dw = p.district_of(u), p.district_of(w)
        if du != dw and k * (len(p.districts[du]) + len(p.districts[dw])) <= 2 * n:
            return du, dw
    raise ValueError("no pair found")


def step_average(
    g: Graph, cycle: CycleOrder, p: Partition, i: int, j: int, slack: SlackBound
) -> RecombMove:
    """Recombine two C-adjacent districts of combined size <= n/k + s; either
    the fragment count drops or a singleton district is created."""
    n, k = cycle.n, p.k
    vi, vj = p.districts[i], p.districts[j]
    union = vi | vj
    if slack.s is not None and k * len(union) > n + k * slack.s:
        raise ValueError("combined district size exceeds n/k + s")
    edges_i, chords_i = _district_tree(g, cycle, p, i)
    edges_j, chords_j = _district_tree(g, cycle, p, j)
    pos = cycle.positions()
    bridge = None
    for t in range(n):
        u = cycle.order[t]
        w = cycle.order[(t + 1) % n]
        if (u in vi and w in vj) or (u in vj and w in vi):
            bridge = (min(u, w), max(u, w))
            break
    if bridge is None:
        raise ValueError("districts not adjacent along C")
    all_chords = sorted(chords_i | chords_j)
    if all_chords:
        e = all_chords[0]
        edges = (edges_i | edges_j | {bridge}) - {e}
        adj: dict[int, set[int]] = {v: set() for v in union}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        start = e[0]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        part_a = frozenset(seen)
        part_b = union - part_a
        assert part_b, "removing a tree edge must split the spanning tree"
        return _resolve_pair(p, i, j, part_a, part_b)
    # Both districts are single arcs: the union is a chain along C.
    positions = sorted(pos[v] for v in union)
    start_pos = None
    pos_set = set(positions)
    for t in positions:
        if (t - 1) % n not in pos_set:
            start_pos = t
            break
    if start_pos is None:
        # Union covers the whole cycle (k = 2 and both arcs).
        start_pos = 0
    v = cycle.order[start_pos]
    part_a = frozenset({v})
    part_b = union - part_a
    return _resolve_pair(p, i, j, part_a, part_b)


def _resolve_pair(p: Partition, i: int, j: int, part_a: frozenset, part_b: frozenset) -> RecombMove:
    """Assign the two new parts to labels i<j deterministically."""
    a, b = (part_a, part_b) if min(part_a) < min(part_b) else (part_b, part_a)
    return RecombMove(min(i, j), max(i, j), a, b)


def steps_singleton(
    g: Graph, cycle: CycleOrder, p: Partition, slack: SlackBound
) -> list[RecombMove]:
    """At most k-1 moves that walk a singleton district along single-fragment
    districts and absorb one side of a chord split, decreasing fragments."""
    n = cycle.n
    singles = sorted(v for d in p.districts if len(d) == 1 for v in d)
    if not singles:
        raise ValueError("no singleton present")
    frag_counts = {}
    for f in fragments_of(cycle, p):
        frag_counts[f.district] = frag_counts.get(f.district, 0) + 1
    if all(c == 1 for c in frag_counts.values()):
        raise ValueError("partition already canonical")
    pos = cycle.positions()
    u = singles[0]
    # Walk clockwise to the first district with two or more fragments.
    t = 1
    while True:
        d = p.district_of(cycle.order[(pos[u] + t) % n])
        if frag_counts[d] >= 2:
            break
        t += 1
    chain_positions = [(pos[u] + x) % n for x in range(t)]
    chain_districts: list[int] = []
    for cp in chain_positions:
        d = p.district_of(cycle.order[cp])
        if not chain_districts or chain_districts[-1] != d:
            chain_districts.append(d)
    moves: list[RecombMove] = []
    cur = p
    # Shift the chain contents so the singleton ends next to the target.
    for idx in range(len(chain_districts) - 1):
        da, db = chain_districts[idx], chain_districts[idx + 1]
        run = sorted(cur.districts[da] | cur.districts[db], key=lambda v: ((pos[v] - pos[u]) % n))
        cut = len(cur.districts[db])
        part_a = frozenset(run[:cut])
        part_b = frozenset(run[cut:])
        m = _resolve_pair(cur, da, db, part_a, part_b)
        cur = apply_move(g, cur, m, slack)
        moves.append(m)
    # Case 1: absorb one side of a chord split of the multi-fragment district.
    w = cycle.order[chain_positions[-1]]
    dw = cur.district_of(w)
    assert len(cur.districts[dw]) == 1
    succ = cycle.order[(chain_positions[-1] + 1) % n]
    d2 = cur.district_of(succ)
    edges2, chords2 = _district_tree(g, cycle, cur, d2)
    assert chords2, "target district must have a chord"
    e = sorted(chords2)[0]
    edges = edges2 - {e}
    adj: dict[int, set[int]] = {v: set() for v in cur.districts[d2]}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {succ}
    stack = [succ]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    t_minus = frozenset(seen)
    t_plus = cur.districts[d2] - t_minus
    part_a = frozenset({w}) | t_minus
    m = _resolve_pair(cur, dw, d2, part_a, t_plus)
    cur = apply_move(g, cur, m, slack)
    moves.append(m)
    return moves


def _check_preconditions(g: Graph, cycle: CycleOrder, k: int, slack: SlackBound):
    cycle.check(g)
    n = g.n
    if n % k != 0:
        raise ValueError(f"k={k} must divide n={n} for the canonical machinery")
    if slack.s is not None and k * slack.s < n:
        raise ValueError(f"slack {slack} is below n/k = {n // k}")


def canonicalize(
    g: Graph, cycle: CycleOrder, p: Partition, slack: SlackBound
) -> tuple[list[RecombMove], Partition]:
    """Defragment p into a canonical partition in at most k(n-k) moves."""
    k = p.k
    _check_preconditions(g, cycle, k, slack)
    rep = validate(g, p, k, slack)
    if not rep.ok:
        raise ValueError(f"invalid partition: {'; '.join(rep.violations)}")
    moves: list[RecombMove] = []
    cur = p
    frags = fragment_count(cycle, cur)
    while frags > k:
        m = step_light(g, cycle, cur, slack)
        if m is not None:
            cur = apply_move(g, cur, m, slack)
            moves.append(m)
        elif any(len(d) == 1 for d in cur.districts):
            for m in steps_singleton(g, cycle, cur, slack):
                cur = apply_move(g, cur, m, slack)
                moves.append(m)
        else:
            i, j = find_small_adjacent_pair(cycle, cur)
            m = step_average(g, cycle, cur, i, j, slack)
            cur = apply_move(g, cur, m, slack)
            moves.append(m)
            if fragment_count(cycle, cur) == frags:
                for m in steps_singleton(g, cycle, cur, slack):
                    cur = apply_move(g, cur, m, slack)
                    moves.append(m)
        new_frags = fragment_count(cycle, cur)
        assert new_frags < frags, "fragment count must strictly decrease"
        frags = new_frags
    assert len(moves) <= k * (g.n - k)
    return moves, cur


def _arcs_in_cycle_order(cycle: CycleOrder, p: Partition) -> list[list[int]]:
    frags = fragments_of(cycle, p)
    seen_districts = [f.district for f in frags]
    if len(set(seen_districts)) != len(seen_districts):
        raise ValueError("partition is not canonical")
    return [
        [cycle.order[(f.start + x) % cycle.n] for x in range(f.length)] for f in frags
    ]


def _balance_abstract(arcs: list[list[int]], target: int) -> list[AbstractMove]:
    """Bring all cyclically-ordered arcs to the target size, paper-style:
    repeatedly fix the first unbalanced arc by propagating from the first
    below/above sign change."""
    k = len(arcs)
    out: list[AbstractMove] = []

    def recombine(a: int, b: int, new_len_a: int):
        combined = arcs[a] + arcs[b]
        arcs[a] = combined[:new_len_a]
        arcs[b] = combined[new_len_a:]
        out.append((frozenset(arcs[a]), frozenset(arcs[b])))

    m = 0
    while m < k:
        if len(arcs[m]) == target:
            m += 1
            continue
        sign = 1 if len(arcs[m]) > target else -1
        j = m
        while sign * (len(arcs[j + 1]) - target) > 0:
            j += 1
        assert j + 1 < k, "average arc size must equal the target"
        recombine(j, j + 1, target)
        for i in range(j - 1, m - 1, -1):
            recombine(i, i + 1, target)
        m += 1
    return out


def _shift_abstract(arcs: list[list[int]], delta: int) -> list[AbstractMove]:
    """Cyclic shift of balanced arcs by delta positions in at most k moves."""
    k = len(arcs)
    out: list[AbstractMove] = []
    if delta == 0 or k == 1:
        return out

    def transfer_head(a: int, b: int, count: int):
        # Arc b cyclically follows arc a; move the first `count` vertices of b
        # onto the tail of a.
        moved, arcs[b] = arcs[b][:count], arcs[b][count:]
        arcs[a] = arcs[a] + moved
        out.append((frozenset(arcs[a]), frozenset(arcs[b])))

    transfer_head(0, 1, delta)
    for i in range(1, k - 1):
        transfer_head(i, i + 1, delta)
    # Close the loop: the head of arc 0 moves to the tail of the last arc.
    moved, arcs[0] = arcs[0][:delta], arcs[0][delta:]
    arcs[k - 1] = arcs[k - 1] + moved
    out.append((frozenset(arcs[k - 1]), frozenset(arcs[0])))
    return out


def canonical_transform(
    g: Graph, cycle: CycleOrder, pc1: Partition, pc2: Partition, slack: SlackBound
) -> list[RecombMove]:
    """At most k^2+1 moves between canonical partitions, through canonical
    partitions only."""
    k = pc1.k
    _check_preconditions(g, cycle, k, slack)
    if canonical_key(pc1) == canonical_key(pc2):
        return []
    target = cycle.n // k
    arcs1 = _arcs_in_cycle_order(cycle, pc1)
    arcs2 = _arcs_in_cycle_order(cycle, pc2)
    bal1 = _balance_abstract(arcs1, target)
    bal2 = _balance_abstract(arcs2, target)
    pos = cycle.positions()
    c1 = min(pos[arc[0]] for arc in arcs1) % target
    c2 = min(pos[arc[0]] for arc in arcs2) % target
    delta = (c2 - c1) % target
    # Rotate bookkeeping so arcs1[0] starts the shift.
    shift = _shift_abstract(arcs1, delta)
    # Undo pc2's balancing at the end.
    moves2, end2 = resolve_moves(g, pc2, bal2, slack)
    back2 = inverted_abstract(g, pc2, moves2, slack)
    abstract = bal1 + shift + back2
    moves, final = resolve_moves(g, pc1, abstract, slack)
    assert canonical_key(final) == canonical_key(pc2)
    assert len(moves) <= k * k + 1
    return moves


def transform_hamiltonian(
    g: Graph, cycle: CycleOrder, p1: Partition, p2: Partition, slack: SlackBound
) -> list[RecombMove]:
    """Transform p1 into p2 via canonical form; at most 2k(n-k) + k^2 + 1 moves."""
    if p1.k != p2.k:
        raise ValueError(f"mismatched k: {p1.k} vs {p2.k}")
    k, n = p1.k, g.n
    if canonical_key(p1) == canonical_key(p2):
        return []
    m1, c1 = canonicalize(g, cycle, p1, slack)
    m2, c2 = canonicalize(g, cycle, p2, slack)
    mid = canonical_transform(g, cycle, c1, c2, slack)
    back = inverted_abstract(g, p2, m2, slack)
    abstract = abstract_of(m1) + abstract_of(mid) + back
    moves, final = resolve_moves(g, p1, abstract, slack)
    assert canonical_key(final) == canonical_key(p2)
    assert len(moves) <= 2 * k * (n - k) + k * k + 1
    return moves
