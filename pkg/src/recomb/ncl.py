"""Reduction from constraint-logic orientation reconfiguration to balanced
recombination with zero slack.

Each vertex of the (subdivided) constraint graph becomes a gadget; each edge
becomes a pair of light vertices e+ / e- shared between its two endpoint
gadgets.  Heavy vertices carry integer weights, realized as leaf stars.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .graphs import Graph
from .partitions import Partition

AND, OR, DEG2 = "AND", "OR", "DEG2"
RED, BLUE = "red", "blue"


@dataclass(frozen=True)
class NCLInstance:
    """An AND/OR constraint graph; DEG2 vertices appear after subdivision."""

    kinds: tuple[str, ...]  # per-vertex: AND | OR | DEG2
    edges: tuple[tuple[int, int, str], ...]  # (u, v, color)

    @property
    def nv(self) -> int:
        return len(self.kinds)

    @property
    def ne(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> list[int]:
        return [e for e, (a, b, _) in enumerate(self.edges) if v in (a, b)]

    def check(self) -> None:
        for v, kind in enumerate(self.kinds):
            inc = self.incident(v)
            colors = sorted(self.edges[e][2] for e in inc)
            if kind == OR:
                if colors != [BLUE] * 3:
                    raise ValueError(f"OR vertex {v} must have three blue edges")
            elif kind == AND:
                if colors != [BLUE, RED, RED]:
                    raise ValueError(f"AND vertex {v} must have two red and one blue edge")
            elif kind == DEG2:
                if len(inc) != 2:
                    raise ValueError(f"degree-2 vertex {v} must have exactly two edges")
            else:
                raise ValueError(f"unknown vertex kind {kind!r}")


@dataclass(frozen=True)
class Orientation:
    """Per-edge direction: 'uv' points u -> v (toward v), 'vu' the reverse."""

    dirs: tuple[str, ...]

    def head(self, ncl: NCLInstance, e: int) -> int:
        u, v, _ = ncl.edges[e]
        return v if self.dirs[e] == "uv" else u

    def toward(self, ncl: NCLInstance, e: int, x: int) -> bool:
        return self.head(ncl, e) == x

    def flip(self, e: int) -> "Orientation":
        d = list(self.dirs)
        d[e] = "vu" if d[e] == "uv" else "uv"
        return Orientation(tuple(d))


def subdivide_ncl(ncl: NCLInstance) -> NCLInstance:
    """Replace each edge by a degree-2 vertex and two half-edges inheriting
    the color; edge e becomes vertex nv+e with half-edges 2e and 2e+1."""
    ncl.check()
    kinds = list(ncl.kinds)
    edges: list[tuple[int, int, str]] = []
    for e, (u, v, color) in enumerate(ncl.edges):
        mid = ncl.nv + e
        kinds.append(DEG2)
        edges.append((u, mid, color))
        edges.append((mid, v, color))
    return NCLInstance(tuple(kinds), tuple(edges))


def check_orientation(ncl: NCLInstance, o: Orientation) -> bool:
    """True iff the AND/OR in-weight constraints and the degree-2 incoming
    constraint all hold."""
    if len(o.dirs) != ncl.ne:
        raise ValueError("orientation does not cover all edges")
    for v, kind in enumerate(ncl.kinds):
        inc = ncl.incident(v)
        inward = [e for e in inc if o.toward(ncl, e, v)]
        if kind == DEG2:
            if not inward:
                return False
        else:
            weight = sum(2 if ncl.edges[e][2] == BLUE else 1 for e in inward)
            if weight < 2:
                return False
    return True


def expand_orientation(ncl: NCLInstance, o: Orientation) -> Orientation:
    """Lift an orientation of the original edges to the subdivision: both
    half-edges of an edge point the same way as the edge."""
    if len(o.dirs) != ncl.ne:
        raise ValueError("orientation does not cover all edges")
    dirs = []
    for d in o.dirs:
        dirs.extend([d, d])
    return Orientation(tuple(dirs))


class ReductionShapeError(ValueError):
    """Partition does not have the heavy-vertex grouping of any M_X member."""


@dataclass
class ReductionOutput:
    graph: Graph
    k: int
    s: int
    alpha: int
    pi_a: Partition
    pi_b: Partition
    ncl: NCLInstance  # the subdivided instance the partitions encode
    edge_map: dict[int, tuple[int, int]]  # NCL' edge -> (e+ id, e- id)
    gadget_vertices: dict[int, dict[str, int]]  # NCL' vertex -> role -> base id
    heavy: dict[int, tuple[int, tuple[int, ...]]]  # base id -> (weight, leaves)
    district_index: dict[tuple[str, int], int]  # ("v", x) / ("vp", x) -> label

    def heavy_group(self, base: int) -> frozenset[int]:
        w, leaves = self.heavy[base]
        return frozenset((base,) + leaves)


class _Builder:
    def __init__(self):
        self.next_id = 0
        self.edges: set[tuple[int, int]] = set()
        self.heavy: dict[int, tuple[int, tuple[int, ...]]] = {}

    def vertex(self) -> int:
        v = self.next_id
        self.next_id += 1
        return v

    def heavy_vertex(self, weight: int) -> int:
        base = self.vertex()
        leaves = tuple(self.vertex() for _ in range(weight - 1))
        for leaf in leaves:
            self.add(base, leaf)
        self.heavy[base] = (weight, leaves)
        return base

    def add(self, a: int, b: int) -> None:
        self.edges.add((min(a, b), max(a, b)))


def _sorted_incident(ncl: NCLInstance, v: int) -> list[int]:
    return sorted(ncl.incident(v))


def reduce_ncl(
    ncl: NCLInstance, a: Orientation, b: Orientation, s: int
) -> ReductionOutput:
    """Build the zero-slack balanced-recombination instance for two satisfying
    orientations of the subdivided constraint graph.

    Every district has exactly 10*alpha vertices with alpha = 5 + s; slack
    only loosens intermediate states.
    """
    if s < 0:
        raise ValueError("slack must be >= 0")
    sub = subdivide_ncl(ncl)
    if len(a.dirs) == ncl.ne:
        a = expand_orientation(ncl, a)
    if len(b.dirs) == ncl.ne:
        b = expand_orientation(ncl, b)
    for name, o in (("A", a), ("B", b)):
        if not check_orientation(sub, o):
            raise ValueError(f"orientation {name} does not satisfy the constraints")
    alpha = 5 + s
    n_or = sum(1 for kind in sub.kinds if kind == OR)
    bld = _Builder()
    # Lights first: e+ = 2e, e- = 2e+1 for each subdivided edge.
    edge_map: dict[int, tuple[int, int]] = {}
    for e in range(sub.ne):
        ep = bld.vertex()
        em = bld.vertex()
        edge_map[e] = (ep, em)
    gadget_vertices: dict[int, dict[str, int]] = {}
    for v, kind in enumerate(sub.kinds):
        inc = _sorted_incident(sub, v)
        roles: dict[str, int] = {}
        if kind == AND:
            reds = [e for e in inc if sub.edges[e][2] == RED]
            blue = next(e for e in inc if sub.edges[e][2] == BLUE)
            ea, eb = sorted(reds)
            ha = bld.heavy_vertex(alpha)
            hb = bld.heavy_vertex(alpha)
            hc = bld.heavy_vertex(8 * alpha - 3)
            roles = {f"h{ea}": ha, f"h{eb}": hb, f"h{blue}": hc}
            for e, h in ((ea, ha), (eb, hb), (blue, hc)):
                ep, em = edge_map[e]
                bld.add(h, ep)
                bld.add(h, em)
            bld.add(edge_map[blue][0], ha)
            bld.add(edge_map[blue][0], hb)
            bld.add(edge_map[ea][0], hc)
            bld.add(edge_map[eb][0], hc)
        elif kind == OR:
            ea, eb, ec = inc
            terminals = {
                ea: bld.heavy_vertex(alpha),
                eb: bld.heavy_vertex(alpha),
                ec: bld.heavy_vertex(6 * alpha - 3),
            }
            primes = {e: bld.heavy_vertex(alpha) for e in inc}
            vp = bld.heavy_vertex(9 * alpha)
            for e in inc:
                roles[f"h{e}"] = terminals[e]
                roles[f"p{e}"] = primes[e]
            roles["vp"] = vp
            for e in inc:
                ep, em = edge_map[e]
                bld.add(terminals[e], ep)
                bld.add(terminals[e], em)
                bld.add(primes[e], terminals[e])
                bld.add(vp, primes[e])
                for f in inc:
                    if f != e:
                        bld.add(ep, primes[f])
            bld.add(primes[ea], primes[eb])
            bld.add(primes[eb], primes[ec])
            bld.add(primes[ea], primes[ec])
        else:  # DEG2
            ec, ed = inc
            qc = bld.heavy_vertex(5 * alpha - 1)
            qd = bld.heavy_vertex(5 * alpha - 1)
            roles = {f"h{ec}": qc, f"h{ed}": qd}
            for e, q in ((ec, qc), (ed, qd)):
                ep, em = edge_map[e]
                bld.add(q, ep)
                bld.add(q, em)
            bld.add(edge_map[ec][0], qd)
            bld.add(edge_map[ed][0], qc)
        gadget_vertices[v] = roles
    g = Graph(bld.next_id, bld.edges)
    k = sub.nv + n_or

    def heavy_group(base: int) -> set[int]:
        w, leaves = bld.heavy[base]
        return {base, *leaves}

    def partition_for(x: Orientation) -> tuple[Partition, dict[tuple[str, int], int]]:
        districts: list[set[int]] = []
        index: dict[tuple[str, int], int] = {}
        for v, kind in enumerate(sub.kinds):
            inc = _sorted_incident(sub, v)
            roles = gadget_vertices[v]
            own_lights = {
                edge_map[e][0] if x.toward(sub, e, v) else edge_map[e][1] for e in inc
            }
            if kind == OR:
                incoming = [e for e in inc if x.toward(sub, e, v)]
                e1 = min(incoming)
                dv: set[int] = set(own_lights)
                for e in inc:
                    dv |= heavy_group(roles[f"h{e}"])
                    if e != e1:
                        dv |= heavy_group(roles[f"p{e}"])
                dvp = heavy_group(roles["vp"]) | heavy_group(roles[f"p{e1}"])
                index[("v", v)] = len(districts)
                districts.append(dv)
                index[("vp", v)] = len(districts)
                districts.append(dvp)
            else:
                dv = set(own_lights)
                for role, base in roles.items():
                    dv |= heavy_group(base)
                index[("v", v)] = len(districts)
                districts.append(dv)
        return Partition.of(districts), index

    pi_a, index = partition_for(a)
    pi_b, index_b = partition_for(b)
    assert index_b == index
    heavy = {base: (w, leaves) for base, (w, leaves) in bld.heavy.items()}
    return ReductionOutput(
        g, k, s, alpha, pi_a, pi_b, sub, edge_map, gadget_vertices, heavy, index
    )


def partition_to_orientation(r: ReductionOutput, p: Partition) -> Orientation:
    """Read back the orientation: edge e points toward v iff e+ lies in the
    district of v's gadget.  Raises ReductionShapeError when p does not
    respect the heavy-vertex groupings."""
    sub = r.ncl
    district_of: dict[int, int] = {}
    for i, d in enumerate(p.districts):
        for v in d:
            district_of[v] = i
    gadget_district: dict[int, int] = {}
    for v, kind in enumerate(sub.kinds):
        roles = r.gadget_vertices[v]
        terminal_bases = [base for role, base in roles.items() if role.startswith("h")]
        homes = {district_of[base] for base in terminal_bases}
        if len(homes) != 1:
            raise ReductionShapeError(
                f"{kind} gadget at vertex {v}: heavy vertices span districts {sorted(homes)}"
            )
        gadget_district[v] = homes.pop()
        if kind == OR:
            vp_home = district_of[roles["vp"]]
            prime_homes = {district_of[roles[f"p{e}"]] for e in _sorted_incident(sub, v)}
            if not prime_homes <= {gadget_district[v], vp_home}:
                raise ReductionShapeError(
                    f"OR gadget at vertex {v}: connector vertices outside the gadget districts"
                )
    dirs = []
    for e, (u, v, _) in enumerate(sub.edges):
        ep, _em = r.edge_map[e]
        home = district_of[ep]
        if home == gadget_district[v]:
            dirs.append("uv")
        elif home == gadget_district[u]:
            dirs.append("vu")
        else:
            raise ReductionShapeError(
                f"edge {e}: its plus-vertex is in neither endpoint gadget's district"
            )
    return Orientation(tuple(dirs))


def flip_pairs(r: ReductionOutput, e: int) -> list[tuple[int, int]]:
    """District pairs local to edge e's two endpoint gadgets, for restricted
    reachability searches around a single-edge flip."""
    u, v, _ = r.ncl.edges[e]
    labels = []
    for x in (u, v):
        labels.append(r.district_index[("v", x)])
        if ("vp", x) in r.district_index:
            labels.append(r.district_index[("vp", x)])
    return [(a, b) for i, a in enumerate(labels) for b in labels[i + 1 :]]


def parse_ncl(text: str) -> tuple[NCLInstance, dict[str, Orientation]]:
    """Parse the NCL file format, including named orientation blocks."""
    lines = [ln.strip() for ln in text.split("\n") if ln.strip()]
    if not lines or not lines[0].startswith("ncl "):
        raise ValueError("first line must be 'ncl <nv> <ne>'")
    _, nv_s, ne_s = lines[0].split()
    nv, ne = int(nv_s), int(ne_s)
    kinds: list[Optional[str]] = [None] * nv
    edges: list[Optional[tuple[int, int, str]]] = [None] * ne
    orients: dict[str, Orientation] = {}
    i = 1
    for _ in range(nv):
        parts = lines[i].split()
        if parts[0] != "v":
            raise ValueError(f"expected vertex line, got {lines[i]!r}")
        kinds[int(parts[1])] = parts[2]
        i += 1
    for _ in range(ne):
        parts = lines[i].split()
        if parts[0] != "e":
            raise ValueError(f"expected edge line, got {lines[i]!r}")
        edges[int(parts[1])] = (int(parts[2]), int(parts[3]), parts[4])
        i += 1
    while i < len(lines):
        parts = lines[i].split()
        if parts[0] != "orient":
            raise ValueError(f"expected orient block, got {lines[i]!r}")
        name = parts[1]
        i += 1
        dirs: list[Optional[str]] = [None] * ne
        for _ in range(ne):
            eid, d = lines[i].split()
            if d not in ("uv", "vu"):
                raise ValueError(f"bad direction {d!r}")
            dirs[int(eid)] = d
            i += 1
        orients[name] = Orientation(tuple(dirs))
    if any(kind is None for kind in kinds) or any(e is None for e in edges):
        raise ValueError("missing vertex or edge declarations")
    return NCLInstance(tuple(kinds), tuple(edges)), orients


def format_ncl(ncl: NCLInstance, orients: Optional[dict[str, Orientation]] = None) -> str:
    out = [f"ncl {ncl.nv} {ncl.ne}"]
    for v, kind in enumerate(ncl.kinds):
        out.append(f"v {v} {kind}")
    for e, (u, v, color) in enumerate(ncl.edges):
        out.append(f"e {e} {u} {v} {color}")
    for name, o in (orients or {}).items():
        out.append(f"orient {name}")
        for e, d in enumerate(o.dirs):
            out.append(f"{e} {d}")
    return "\n".join(out) + "\n"


def format_map(r: ReductionOutput) -> str:
    """JSON-lines description of the reduction's vertex bookkeeping."""
    records = []
    for e, (ep, em) in sorted(r.edge_map.items()):
        records.append({"kind": "edge", "ncl_id": e, "graph_vertices": [ep, em]})
    for v in sorted(r.gadget_vertices):
        vs: list[int] = []
        for base in r.gadget_vertices[v].values():
            w, leaves = r.heavy[base]
            vs.append(base)
            vs.extend(leaves)
        records.append(
            {"kind": r.ncl.kinds[v].lower(), "ncl_id": v, "graph_vertices": sorted(vs)}
        )
    return "\n".join(json.dumps(rec, sort_keys=True) for rec in records) + "\n"


def k4_all_blue() -> tuple[NCLInstance, Orientation, Orientation]:
    """The K4 instance with four OR vertices, plus two satisfying orientations
    of its subdivision that differ in one original edge's direction."""
    edges = tuple(
        (u, v, BLUE) for u in range(4) for v in range(u + 1, 4)
    )
    ncl = NCLInstance((OR,) * 4, edges)
    sub = subdivide_ncl(ncl)

    def dirs_for(heads: dict[tuple[int, int], int]) -> Orientation:
        # Original edge u->head: both half-edges point along it, so the middle
        # vertex and the head each get an incoming half-edge.
        dirs = []
        for u, v, _ in ncl.edges:
            if heads[(u, v)] == v:
                dirs.extend(["uv", "uv"])
            else:
                dirs.extend(["vu", "vu"])
        return Orientation(tuple(dirs))

    # Directed 4-cycle 0->1->2->3->0 plus 0->2 and 1->3: in-degree >= 1 at
    # every vertex.  B reverses the edge (1,2).
    heads_a = {(0, 1): 1, (0, 2): 2, (0, 3): 0, (1, 2): 2, (1, 3): 3, (2, 3): 3}
    heads_b = {**heads_a, (1, 2): 1}
    a = dirs_for(heads_a)
    b = dirs_for(heads_b)
    assert check_orientation(sub, a) and check_orientation(sub, b)
    return ncl, a, b
