"""
Edge-list text format.

    n m
    u v        (m lines, 0-indexed, u < v)

ASCII with LF line endings. Duplicates, self-loops, reversed pairs,
out-of-range endpoints and a wrong line count are parse errors.
"""
import re
from typing import IO, Iterable, Union

from src.config import settings
from src.errors import EdgeListFormatError, InputError
from src.models.graph import Edge, Graph

HEADER_PATTERN = re.compile(r'^(\d+) (\d+)$')
EDGE_PATTERN = re.compile(r'^(\d+) (\d+)$')


def parse_edge_list(text: str) -> Graph:
    if "\r" in text:
        raise EdgeListFormatError("CR characters are not allowed, use LF line endings")
    if not text.isascii():
        raise EdgeListFormatError("edge list must be ASCII")

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EdgeListFormatError("empty input, expected header 'n m'", 1)

    header = HEADER_PATTERN.match(lines[0])
    if not header:
        raise EdgeListFormatError(f"bad header {lines[0]!r}, expected 'n m'", 1)
    n, m = int(header.group(1)), int(header.group(2))
    if n < 1:
        raise EdgeListFormatError("vertex count must be positive", 1)
    if n > settings.MAX_VERTICES:
        raise EdgeListFormatError(f"vertex count {n} exceeds the limit of {settings.MAX_VERTICES}", 1)

    body = lines[1:]
    if len(body) != m:
        raise EdgeListFormatError(f"header announces {m} edges, found {len(body)} lines")

    graph = Graph(n)
    for offset, line in enumerate(body, start=2):
        match = EDGE_PATTERN.match(line)
        if not match:
            raise EdgeListFormatError(f"bad edge line {line!r}", offset)
        u, v = int(match.group(1)), int(match.group(2))
        if u == v:
            raise EdgeListFormatError(f"self-loop at vertex {u}", offset)
        if u > v:
            raise EdgeListFormatError(f"endpoints must be ordered u < v, got {u} {v}", offset)
        if v >= n:
            raise EdgeListFormatError(f"vertex {v} out of range for n={n}", offset)
        try:
            added = graph.add_edge(Edge(u, v))
        except InputError as e:
            raise EdgeListFormatError(str(e), offset) from e
        if not added:
            raise EdgeListFormatError(f"duplicate edge {u} {v}", offset)
    return graph


def read_edge_list(source: Union[str, IO[str]]) -> Graph:
    """Reads from a path or an open text stream."""
    try:
        if isinstance(source, str):
            with open(source, "r", encoding="ascii", newline="") as handle:
                return parse_edge_list(handle.read())
        return parse_edge_list(source.read())
    except UnicodeDecodeError as e:
        raise EdgeListFormatError(f"edge list must be ASCII: {e}") from e


def format_edge_list(n: int, edges: Iterable[Edge]) -> str:
    edges = sorted(edges)
    lines = [f"{n} {len(edges)}"]
    lines.extend(f"{e.u} {e.v}" for e in edges)
    return "\n".join(lines) + "\n"


def write_edge_list(graph: Graph, target: Union[str, IO[str]]):
    text = format_edge_list(graph.n, graph.edges())
    if isinstance(target, str):
        with open(target, "w", encoding="ascii", newline="\n") as handle:
            handle.write(text)
    else:
        target.write(text)
