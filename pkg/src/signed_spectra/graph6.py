"""graph6 encoding of underlying (unsigned) graphs."""

from __future__ import annotations

from typing import IO, Iterable, Iterator

from .errors import ParseError
from .graph import SignedGraph

HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise ValueError(f"graph6 cannot encode n={n}")


def _decode_n(data: bytes) -> tuple[int, bytes]:
    if not data:
        raise ParseError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, data[1:]
    if len(data) > 1 and data[1] == 126:
        if len(data) < 8:
            raise ParseError("truncated graph6 size field")
        n = 0
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
        return n, data[8:]
    if len(data) < 4:
        raise ParseError("truncated graph6 size field")
    n = 0
    for b in data[1:4]:
        n = (n << 6) | (b - 63)
    return n, data[4:]


def encode(g: SignedGraph) -> str:
    """graph6 string of the underlying graph (signs are dropped)."""
    bits = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if g.has_edge(u, v) else 0)
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[i : i + 6])), 2)) for i in range(0, len(bits), 6)
    )
    return _encode_n(g.n) + body


def decode(text: str, signs: Iterable[int] | None = None) -> SignedGraph:
    """Parse one graph6 line; edges are positive unless ``signs`` is given.

    ``signs`` lists one sign per edge in canonical (lexicographic) order.
    """
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    data = s.encode("ascii")
    if any(b < 63 or b > 126 for b in data):
        raise ParseError(f"invalid graph6 character in {text!r}")
    n, body = _decode_n(data)
    if n < 1:
        raise ParseError("graph6 graphs here need at least one vertex")
    need = n * (n - 1) // 2
    if len(body) * 6 < need or len(body) != (need + 5) // 6:
        raise ParseError(f"graph6 body has wrong length for n={n}")
    edges = []
    k = 0
    for v in range(1, n):
        for u in range(v):
            byte = body[k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                edges.append((u, v))
            k += 1
    edges.sort()
    if signs is None:
        sign_t = (1,) * len(edges)
    else:
        sign_t = tuple(int(x) for x in signs)
        if len(sign_t) != len(edges):
            raise ParseError(f"{len(sign_t)} signs for {len(edges)} edges")
    return SignedGraph(n, tuple(edges), sign_t)


def parse_signed(line: str) -> SignedGraph:
    """``<graph6> <signs>`` where signs is a string of ``+``/``-`` in edge order."""
    parts = line.split()
    if not parts:
        raise ParseError("empty line")
    if len(parts) == 1:
        return decode(parts[0])
    if len(parts) != 2 or set(parts[1]) - {"+", "-"}:
        raise ParseError(f"expected '<graph6> <+-...>', got {line!r}")
    return decode(parts[0], [1 if c == "+" else -1 for c in parts[1]])


def format_signed(g: SignedGraph) -> str:
    return encode(g) + " " + "".join("+" if s > 0 else "-" for s in g.signs)


def read_graph6(stream: IO[str] | Iterable[str]) -> Iterator[SignedGraph]:
    for line in stream:
        line = line.strip()
        if line and not line.startswith("#"):
            yield decode(line)


def write_graph6(graphs: Iterable[SignedGraph], stream: IO[str]) -> None:
    for g in graphs:
        stream.write(encode(g) + "\n")
