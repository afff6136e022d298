"""graph6 and edge-list codecs."""

from __future__ import annotations

from pathlib import Path

from .graph import Graph

__all__ = [
    "ParseError",
    "GRAPH6_MAX_N",
    "encode_graph6",
    "decode_graph6",
    "format_edgelist",
    "parse_edgelist",
    "read_graph",
    "write_graph",
]

GRAPH6_MAX_N = 68719476735  # 2**36 - 1
_HEADER = b">>graph6<<"


class ParseError(ValueError):
    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


def _size_bytes(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def encode_graph6(g: Graph) -> bytes:
    """graph6 payload (no header, no trailing newline)."""
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 cannot encode n={g.n}")
    out = bytearray(_size_bytes(g.n))
    acc, nbits = 0, 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc, nbits = 0, 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def decode_graph6(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    start = 0
    if data.startswith(_HEADER):
        start = len(_HEADER)
    end = len(data)
    while end > start and data[end - 1] in b"\r\n":
        end -= 1
    for pos in range(start, end):
        if not 63 <= data[pos] <= 126:
            raise ParseError(f"invalid graph6 byte {data[pos]!r}", pos)
    if end == start:
        raise ParseError("empty graph6 payload", start)

    pos = start
    if data[pos] != 126:
        n = data[pos] - 63
        pos += 1
    else:
        width = 3
        if pos + 1 < end and data[pos + 1] == 126:
            width = 6
            pos += 1
        pos += 1
        if pos + width > end:
            raise ParseError("truncated graph6 size field", end)
        n = 0
        for b in data[pos:pos + width]:
            n = (n << 6) | (b - 63)
        pos += width

    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if end - pos < need:
        raise ParseError(f"truncated graph6 bit vector: need {need} bytes, have {end - pos}", end)
    if end - pos > need:
        raise ParseError("trailing bytes after graph6 bit vector", pos + need)

    adj = [0] * n
    k = 0
    byte_at = pos
    i, j = 0, 1
    while k < nbits:
        chunk = data[byte_at] - 63
        byte_at += 1
        for shift in range(5, -1, -1):
            if k == nbits:
                break
            if chunk >> shift & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph(n, tuple(adj))


def format_edgelist(g: Graph) -> str:
    edges = list(g.edges())
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty edge list")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise ParseError(f"bad header line {lines[0]!r}; expected 'n m'") from None
    if len(lines) - 1 != m:
        raise ParseError(f"header announces {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        try:
            u, v = (int(x) for x in ln.split())
        except ValueError:
            raise ParseError(f"bad edge line {ln!r}") from None
        edges.append((u, v))
    try:
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_graph(path: str | Path, fmt: str | None = None) -> Graph:
    path = Path(path)
    fmt = fmt or ("g6" if path.suffix in (".g6", ".graph6") else "edgelist")
    raw = path.read_bytes()
    if fmt == "g6":
        return decode_graph6(raw)
    if fmt == "edgelist":
        return parse_edgelist(raw.decode("utf-8"))
    raise ValueError(f"unknown graph format {fmt!r}")


def write_graph(g: Graph, path: str | Path, fmt: str = "g6") -> None:
    path = Path(path)
    if fmt == "g6":
        path.write_bytes(encode_graph6(g) + b"\n")
    elif fmt == "edgelist":
        path.write_text(format_edgelist(g), encoding="utf-8", newline="\n")
    else:
        raise ValueError(f"unknown graph format {fmt!r}")
