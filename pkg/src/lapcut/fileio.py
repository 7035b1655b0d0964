"""Text formats: edge lists, supply files, and deterministic JSON output.

Edge files hold one edge per line ("u v r"), supply files one vertex per
line ("v b"); '#' starts a comment and blank lines are skipped.  Vertex ids
may be 0-based or 1-based: the edge file decides (any id 0 means 0-based),
and the supply file must follow the same convention.  Floats are serialized
with 17 significant digits so documents round-trip losslessly.
"""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from .errors import ParseError
from .graph import WeightedGraph


def _data_lines(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def read_edge_list(path: str) -> Tuple[WeightedGraph, int]:
    """Parse an edge file; returns (graph, id_base) with id_base 0 or 1."""
    rows: List[Tuple[int, int, int, float]] = []
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(path, lineno, f"expected 'u v r', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            r = float(parts[2])
        except ValueError:
            raise ParseError(path, lineno, f"expected 'u v r', got {line!r}") from None
        if u < 0 or v < 0:
            raise ParseError(path, lineno, f"negative vertex id in {line!r}")
        if not (r > 0.0):
            raise ParseError(path, lineno, f"resistance must be > 0, got {parts[2]}")
        rows.append((lineno, u, v, r))
    if not rows:
        raise ParseError(path, 0, "no edges found")
    base = 0 if any(u == 0 or v == 0 for _, u, v, _ in rows) else 1
    n = max(max(u, v) for _, u, v, _ in rows) - base + 1
    edges = []
    for lineno, u, v, r in rows:
        if u == v:
            raise ParseError(path, lineno, f"self-loop at vertex {u}")
        edges.append((u - base, v - base, r))
    return WeightedGraph(n, edges), base


def read_supply(path: str, n: int, base: int) -> np.ndarray:
    """Parse a supply file against a graph of n vertices with the given id
    base; vertices not mentioned default to 0."""
    b = np.zeros(n, dtype=np.float64)
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(path, lineno, f"expected 'v b', got {line!r}")
        try:
            v = int(parts[0])
            s = float(parts[1])
        except ValueError:
            raise ParseError(path, lineno, f"expected 'v b', got {line!r}") from None
        if base == 1 and v == 0:
            raise ParseError(path, lineno,
                             "vertex id 0 in a 1-based instance (mixed id bases)")
        v -= base
        if not (0 <= v < n):
            raise ParseError(path, lineno, f"vertex id {parts[0]} out of range")
        b[v] += s
    return b


def format_float(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    s = format(float(x), ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"   # keep whole floats typed as floats on re-parse
    return s


def json_dumps(obj, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits, keys in insertion
    order, deterministic byte-for-byte."""
    out: List[str] = []
    _emit(obj, out, 0, indent)
    return "".join(out) + "\n"


def _emit(obj, out: List[str], level: int, indent: int) -> None:
    pad = " " * (indent * (level + 1))
    closepad = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f'{pad}"{k}": ')
            _emit(v, out, level + 1, indent)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(closepad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(items):
            out.append(pad)
            _emit(v, out, level + 1, indent)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(closepad + "]")
    elif isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        out.append(f'"{escaped}"')
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")
