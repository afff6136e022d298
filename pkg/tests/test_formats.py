import random
from itertools import combinations

import networkx as nx
import pytest

from turanstab.formats import (
    ParseError,
    decode_graph6,
    encode_graph6,
    format_edgelist,
    parse_edgelist,
    read_graph,
    write_graph,
)
from turanstab.graph import Graph


def test_empty_graph():
    assert encode_graph6(Graph.empty(0)) == b"?"
    assert decode_graph6(b"?") == Graph.empty(0)


def test_k3_by_hand():
    # n=3 -> chr(66); bits 1,1,1 padded to 111000 = 56 -> chr(119)
    assert encode_graph6(Graph.complete(3)) == b"Bw"
    assert decode_graph6(b"Bw") == Graph.complete(3)


def test_header_and_newline():
    assert decode_graph6(b">>graph6<<Bw\n") == Graph.complete(3)


def test_random_roundtrip_against_networkx():
    rng = random.Random(11)
    for _ in range(1000):
        n = rng.randint(0, 30)
        p = rng.random()
        g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])
        data = encode_graph6(g)
        assert decode_graph6(data) == g
        h = nx.Graph()
        h.add_nodes_from(range(n))
        h.add_edges_from(g.edges())
        assert nx.to_graph6_bytes(h, header=False).rstrip(b"\n") == data


def test_large_n_size_field():
    g = Graph.path(100)
    data = encode_graph6(g)
    assert data[0] == 126
    assert decode_graph6(data) == g


def test_errors_name_offsets():
    with pytest.raises(ParseError, match="byte offset 1"):
        decode_graph6(b"B!")
    with pytest.raises(ParseError, match="truncated"):
        decode_graph6(b"D")
    with pytest.raises(ParseError, match="trailing"):
        decode_graph6(b"Bw?")
    with pytest.raises(ParseError, match="size field"):
        decode_graph6(b"~?")


def test_edgelist_roundtrip(tmp_path):
    g = Graph.cycle(6)
    assert parse_edgelist(format_edgelist(g)) == g
    write_graph(g, tmp_path / "c.edges", "edgelist")
    write_graph(g, tmp_path / "c.g6", "g6")
    assert read_graph(tmp_path / "c.edges") == g
    assert read_graph(tmp_path / "c.g6") == g


def test_edgelist_errors():
    with pytest.raises(ParseError, match="announces"):
        parse_edgelist("3 2\n0 1\n")
    with pytest.raises(ParseError):
        parse_edgelist("3 1\n0 5\n")
    with pytest.raises(ParseError, match="header"):
        parse_edgelist("x\n")
