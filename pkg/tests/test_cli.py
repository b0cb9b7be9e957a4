import os

import pytest

from recomb.cli import dot_export, format_cycle, run
from recomb.graphs import Graph, format_graph, parse_graph
from recomb.hamiltonian import CycleOrder
from recomb.partitions import (
    Partition,
    SlackBound,
    canonical_key,
    format_partition,
    parse_moves,
    parse_partition,
    validate,
)
from recomb.sequences import replay


def write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def read(path):
    with open(path) as fh:
        return fh.read()


@pytest.fixture
def c8(tmp_path):
    g = Graph(8, {(i, (i + 1) % 8) for i in range(8)})
    gp = tmp_path / "g.graph"
    write(gp, format_graph(g))
    pa = Partition.of([[0, 1, 2, 3], [4, 5, 6, 7]])
    pb = Partition.of([[2, 3, 4, 5], [6, 7, 0, 1]])
    ap = tmp_path / "a.part"
    bp = tmp_path / "b.part"
    write(ap, format_partition(pa, 8))
    write(bp, format_partition(pb, 8))
    cp = tmp_path / "c.cycle"
    write(cp, format_cycle(CycleOrder(tuple(range(8)))))
    return g, str(gp), str(ap), str(bp), str(cp)


def test_validate_ok(c8, capsys):
    _, gp, ap, _, _ = c8
    assert run(["validate", "--graph", gp, "--partition", ap, "--k", "2", "--slack", "1"]) == 0
    assert capsys.readouterr().out.strip() == "OK"


def test_validate_failure_exit_2(c8, capsys, tmp_path):
    _, gp, _, _, _ = c8
    bad = tmp_path / "bad.part"
    write(bad, "k 2\n0 0 0 0 0 0 0 1\n")
    assert run(["validate", "--graph", gp, "--partition", str(bad), "--k", "2", "--slack", "1"]) == 2
    assert "size" in capsys.readouterr().err


def test_usage_error_exit_1(capsys):
    assert run(["validate", "--graph", "/nonexistent", "--partition", "/x", "--k", "2", "--slack", "1"]) == 1
    assert run(["frobnicate"]) == 1


def test_transform_unbounded(c8, tmp_path, capsys):
    g, gp, ap, bp, _ = c8
    out = tmp_path / "moves.txt"
    rc = run(["transform", "--mode", "unbounded", "--graph", gp, "--from", ap,
              "--to", bp, "--slack", "inf", "--out", str(out)])
    assert rc == 0
    moves = parse_moves(read(out))
    pa = parse_partition(read(ap))
    pb = parse_partition(read(bp))
    from recomb.partitions import SLACK_INF

    end = replay(g, pa, moves, SLACK_INF)
    assert canonical_key(end) == canonical_key(pb)
    assert int(capsys.readouterr().out.split()[-1]) == len(moves)


def test_transform_hamiltonian(c8, tmp_path):
    g, gp, ap, bp, cp = c8
    out = tmp_path / "moves.txt"
    rc = run(["transform", "--mode", "hamiltonian", "--graph", gp, "--from", ap,
              "--to", bp, "--slack", "4", "--cycle", cp, "--out", str(out)])
    assert rc == 0
    moves = parse_moves(read(out))
    pa = parse_partition(read(ap))
    pb = parse_partition(read(bp))
    end = replay(g, pa, moves, SlackBound(4))
    assert canonical_key(end) == canonical_key(pb)
    # without --cycle the subcommand is a usage error
    assert run(["transform", "--mode", "hamiltonian", "--graph", gp, "--from", ap,
                "--to", bp, "--slack", "4", "--out", str(out)]) == 1


def test_explore(c8, capsys):
    _, gp, _, _, _ = c8
    assert run(["explore", "--graph", gp, "--k", "2", "--slack", "1"]) == 0
    out = capsys.readouterr().out
    lines = dict(ln.split(maxsplit=1) for ln in out.strip().splitlines())
    assert int(lines["nodes"]) > 0
    assert int(lines["components"]) >= 1


def test_decide(c8, tmp_path, capsys):
    g, gp, ap, bp, _ = c8
    out = tmp_path / "path.txt"
    assert run(["decide", "--graph", gp, "--from", ap, "--to", bp,
                "--k", "2", "--slack", "1", "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert stdout.startswith("REACHABLE")
    moves = parse_moves(read(out))
    pa = parse_partition(read(ap))
    pb = parse_partition(read(bp))
    end = replay(g, pa, moves, SlackBound(1))
    assert canonical_key(end) == canonical_key(pb)


def test_gen_families(tmp_path, capsys):
    for family, extra in [
        ("cycle", ["--n", "8"]),
        ("path", ["--n", "5"]),
        ("grid", ["--width", "3", "--height", "3"]),
        ("random", ["--n", "8", "--m", "10", "--seed", "1"]),
    ]:
        prefix = str(tmp_path / family)
        assert run(["gen", "--family", family, *extra, "--out", prefix]) == 0
        g = parse_graph(read(prefix + ".graph"))
        assert g.n > 0
    capsys.readouterr()


def test_gen_negative_files(tmp_path):
    prefix = str(tmp_path / "neg")
    assert run(["gen", "--family", "negative", "--k", "4", "--s", "1", "--out", prefix]) == 0
    g = parse_graph(read(prefix + ".graph"))
    pa = parse_partition(read(prefix + ".a.part"))
    pb = parse_partition(read(prefix + ".b.part"))
    assert validate(g, pa, 4, SlackBound(1)).ok
    assert validate(g, pb, 4, SlackBound(1)).ok
    order = [int(x) for x in read(prefix + ".cycle").split()]
    assert sorted(order) == list(range(g.n))


def test_gen_ncl_files(tmp_path):
    from recomb.ncl import format_ncl, k4_all_blue, Orientation

    ncl, a, b = k4_all_blue()
    orig_a = Orientation(tuple(a.dirs[2 * e] for e in range(ncl.ne)))
    orig_b = Orientation(tuple(b.dirs[2 * e] for e in range(ncl.ne)))
    nclfile = tmp_path / "k4.ncl"
    write(nclfile, format_ncl(ncl, {"A": orig_a, "B": orig_b}))
    prefix = str(tmp_path / "red")
    assert run(["gen", "--family", "ncl", "--ncl", str(nclfile), "--s", "0",
                "--out", prefix]) == 0
    g = parse_graph(read(prefix + ".graph"))
    assert g.n == 700
    pa = parse_partition(read(prefix + ".a.part"))
    assert validate(g, pa, 14, SlackBound(0)).ok
    assert read(prefix + ".map.jsonl").count("\n") > 0


def test_sample_deterministic(c8, tmp_path, capsys):
    _, gp, ap, _, _ = c8
    out1 = tmp_path / "w1.txt"
    out2 = tmp_path / "w2.txt"
    for out in (out1, out2):
        assert run(["sample", "--graph", gp, "--partition", ap, "--k", "2",
                    "--slack", "1", "--steps", "10", "--seed", "42",
                    "--out", str(out)]) == 0
    assert read(out1) == read(out2)
    capsys.readouterr()


def test_dot_export(c8, tmp_path):
    g, gp, ap, _, _ = c8
    dot = tmp_path / "g.dot"
    assert run(["validate", "--graph", gp, "--partition", ap, "--k", "2",
                "--slack", "1", "--dot", str(dot)]) == 0
    text = read(dot)
    assert text.startswith("graph G {")
    assert "0 -- 1;" in text
    assert "fillcolor" in text


def test_roundtrip_byte_exact(c8):
    _, gp, ap, _, _ = c8
    from recomb.graphs import format_graph, parse_graph

    assert format_graph(parse_graph(read(gp))) == read(gp)
    assert format_partition(parse_partition(read(ap)), 8) == read(ap)


def test_node_cap_env_respected(c8, monkeypatch, capsys):
    _, gp, _, _, _ = c8
    monkeypatch.setenv("BCP_NODE_CAP", "1")
    assert run(["explore", "--graph", gp, "--k", "2", "--slack", "1"]) == 1
    assert "cap" in capsys.readouterr().err
