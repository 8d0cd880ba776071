"""graph6 text encoding for dense graphs.

One printable-ASCII token per graph: a length byte (n + 63 for n up to 62)
followed by the upper-triangle adjacency bits read in column order, packed
big-endian into 6-bit groups, each offset by 63. The optional ">>graph6<<"
stream header is accepted on decode and never written.
"""

from __future__ import annotations

from .model import DenseGraph

HEADER = ">>graph6<<"


def encode(graph: DenseGraph) -> str:
    n = graph.n
    if n > 62:
        raise ValueError("only short-form graph6 supported (n <= 62)")
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(graph.rows[i] >> j & 1)
    while len(bits) % 6:
        bits.append(0)
    chars = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        value = 0
        for bit in bits[k : k + 6]:
            value = value << 1 | bit
        chars.append(chr(value + 63))
    return "".join(chars)


def decode(text: str) -> DenseGraph:
    text = text.strip()
    if text.startswith(HEADER):
        text = text[len(HEADER) :]
    if not text:
        raise ValueError("empty graph6 string")
    n = ord(text[0]) - 63
    if not 0 <= n <= 62:
        raise ValueError("only short-form graph6 supported (n <= 62)")
    need = (n * (n - 1) // 2 + 5) // 6
    body = text[1:]
    if len(body) != need:
        raise ValueError(f"graph6 body length {len(body)}, expected {need}")
    bits = []
    for ch in body:
        value = ord(ch) - 63
        if not 0 <= value < 64:
            raise ValueError(f"bad graph6 character {ch!r}")
        bits.extend(value >> k & 1 for k in range(5, -1, -1))
    edges = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                edges.append((i, j))
            pos += 1
    if any(bits[pos:]):
        raise ValueError("nonzero padding bits")
    return DenseGraph.from_edges(n, edges)


def read_graphs(lines) -> list[DenseGraph]:
    """Decode one graph per nonempty line."""
    return [decode(line) for line in lines if line.strip()]


def write_graphs(graphs) -> str:
    return "".join(encode(g) + "\n" for g in graphs)
