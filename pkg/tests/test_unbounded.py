import random

import pytest

from recomb.graphs import Graph, is_connected
from recomb.partitions import (
    Partition,
    SLACK_INF,
    canonical_key,
    validate,
)
from recomb.sequences import replay
from recomb.unbounded import make_singleton_pair, transform_unbounded


def cycle(n):
    return Graph(n, {(i, (i + 1) % n) for i in range(n)})


def random_connected(rng, n, extra=4):
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for _ in range(rng.randint(0, extra)):
        a, b = rng.sample(range(n), 2)
        edges.add((min(a, b), max(a, b)))
    return Graph(n, edges)


def random_partition(rng, g, k, tries=300):
    for _ in range(tries):
        seeds = rng.sample(range(g.n), k)
        assign = {v: i for i, v in enumerate(seeds)}
        frontier = list(seeds)
        while len(assign) < g.n:
            grow = [v for v in frontier for w in g.adj[v] if w not in assign]
            if not grow:
                break
            v = rng.choice(grow)
            w = rng.choice([x for x in g.adj[v] if x not in assign])
            assign[w] = assign[v]
            frontier.append(w)
        if len(assign) == g.n:
            return Partition.of(
                [[v for v in range(g.n) if assign[v] == i] for i in range(k)]
            )
    raise RuntimeError("could not sample a partition")


def test_identity_needs_no_moves():
    g = cycle(6)
    p = Partition.of([[0, 1, 2], [3, 4, 5]])
    q = Partition.of([[3, 4, 5], [0, 1, 2]])  # same unordered partition
    assert transform_unbounded(g, p, q) == []


def test_simple_pair():
    g = cycle(6)
    p = Partition.of([[0, 1, 2], [3, 4, 5]])
    q = Partition.of([[1, 2, 3], [4, 5, 0]])
    moves = replay_checked(g, p, q)
    assert len(moves) <= 6


def replay_checked(g, p, q):
    moves = transform_unbounded(g, p, q)
    cur = p
    for m in moves:
        cur = cur.replace(m.i, m.j, m.new_i, m.new_j)
        rep = validate(g, cur, p.k, SLACK_INF)
        assert rep.ok, rep.violations
    assert canonical_key(cur) == canonical_key(q)
    return moves


def test_make_singleton_pair():
    rng = random.Random(21)
    for _ in range(30):
        n = rng.randint(4, 10)
        k = rng.randint(2, min(4, n - 1))
        g = random_connected(rng, n)
        p1 = random_partition(rng, g, k)
        p2 = random_partition(rng, g, k)
        v, m1, m2 = make_singleton_pair(g, p1, p2)
        assert len(m1) <= 3 and len(m2) <= 3
        for p, ms in ((p1, m1), (p2, m2)):
            end = replay(g, p, ms, SLACK_INF)
            assert frozenset({v}) in end.districts
            assert validate(g, end, k, SLACK_INF).ok


def test_random_instances_within_move_bound():
    rng = random.Random(22)
    for _ in range(80):
        n = rng.randint(3, 11)
        k = rng.randint(2, min(5, n))
        g = random_connected(rng, n)
        p1 = random_partition(rng, g, k)
        p2 = random_partition(rng, g, k)
        moves = replay_checked(g, p1, p2)
        assert len(moves) <= 6 * (k - 1)


def test_rejects_bad_inputs():
    g = cycle(6)
    p = Partition.of([[0, 1, 2], [3, 4, 5]])
    with pytest.raises(ValueError):
        transform_unbounded(g, p, Partition.of([[0, 1], [2, 3], [4, 5]]))
    with pytest.raises(ValueError):
        transform_unbounded(g, Partition.of([[0, 2, 4], [1, 3, 5]]), p)
    disconnected = Graph(4, {(0, 1), (2, 3)})
    with pytest.raises(ValueError):
        transform_unbounded(
            disconnected, Partition.of([[0, 1], [2, 3]]), Partition.of([[0, 1], [2, 3]])
        )
