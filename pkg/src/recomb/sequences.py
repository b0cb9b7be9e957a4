"""Move-sequence plumbing shared by the transformation algorithms.

Internally the algorithms produce "abstract" moves, i.e. unlabeled pairs of
new districts; labels are resolved against a concrete labeled partition when
a sequence is emitted or replayed.
"""

from __future__ import annotations

from typing import Sequence

from .graphs import Graph
from .partitions import Partition, RecombMove, SlackBound, apply_move

AbstractMove = tuple[frozenset, frozenset]


def resolve_moves(
    g: Graph, p: Partition, abstract: Sequence[AbstractMove], slack: SlackBound
) -> tuple[list[RecombMove], Partition]:
    """Turn abstract moves into labeled RecombMoves by replaying from p."""
    cur = p
    out: list[RecombMove] = []
    for part_a, part_b in abstract:
        union = part_a | part_b
        a = cur.district_of(min(union))
        rest = union - cur.districts[a]
        if not rest:
            raise ValueError("abstract move does not touch two districts")
        b = cur.district_of(min(rest))
        if cur.districts[a] | cur.districts[b] != union:
            raise ValueError("abstract move union does not match two districts")
        i, j = min(a, b), max(a, b)
        new_i, new_j = (part_a, part_b) if min(part_a) < min(part_b) else (part_b, part_a)
        m = RecombMove(i, j, new_i, new_j)
        cur = apply_move(g, cur, m, slack)
        out.append(m)
    return out, cur


def replay(g: Graph, p: Partition, moves: Sequence[RecombMove], slack: SlackBound) -> Partition:
    """Apply a concrete move sequence, validating every step."""
    cur = p
    for m in moves:
        cur = apply_move(g, cur, m, slack)
    return cur


def inverted_abstract(
    g: Graph, p: Partition, moves: Sequence[RecombMove], slack: SlackBound
) -> list[AbstractMove]:
    """The reverse sequence, as abstract moves, undoing `moves` (valid from the
    sequence's endpoint back to p; recombination is symmetric)."""
    cur = p
    states: list[tuple[frozenset, frozenset]] = []
    for m in moves:
        states.append((cur.districts[m.i], cur.districts[m.j]))
        cur = apply_move(g, cur, m, slack)
    return [(a, b) for a, b in reversed(states)]


def abstract_of(moves: Sequence[RecombMove]) -> list[AbstractMove]:
    return [(m.new_i, m.new_j) for m in moves]
