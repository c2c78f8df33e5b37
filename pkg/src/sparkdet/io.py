"""Reading lists, partitioned Rdds, pair lists and TSV graphs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .core import Rdd, make_rdd
from .errors import DuplicateVertex, ParseError
from .graphx.graph import Edge, GraphRdd, build_graph
from .values import Pair, from_json


@dataclass(frozen=True)
class ParsedInput:
    """A flat list, or an Rdd whose partitioning was given explicitly."""

    values: tuple
    partitions: Rdd | None = None

    @property
    def explicit(self) -> bool:
        return self.partitions is not None


def read_text(path_or_literal: str) -> tuple[str, str | None]:
    """Contents of the file if ``path_or_literal`` names one, else the text itself."""
    p = Path(path_or_literal)
    try:
        if len(path_or_literal) < 4096 and p.is_file():
            return p.read_text(encoding="utf-8"), str(p)
    except OSError:
        pass
    return path_or_literal, None


def _load_json(text: str, source: str | None) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, column=e.colno, source=source) from None


def _as_pair(obj, where: str, source: str | None) -> Pair:
    if isinstance(obj, list):
        if len(obj) != 2:
            raise ParseError(f"{where}: a pair needs exactly [key, value]", source=source)
        return Pair(from_json(obj[0]), from_json(obj[1]))
    v = from_json(obj)
    if type(v) is not Pair:
        raise ParseError(f"{where}: expected a [key, value] pair", source=source)
    return v


def parse_input(text: str, *, pairs: bool = False) -> ParsedInput:
    """Parse a literal or a file.

    * ``[1, 2, 3]`` is a flat list;
    * ``[[1], [2, 3]]`` is an Rdd with those partitions;
    * ``{"values": [...]}`` forces a flat list, e.g. of lists;
    * ``{"partitions": [[...], ...]}`` is the explicit form of the second case.

    With ``pairs`` the elements are ``[key, value]`` arrays (or tagged pairs),
    so a flat pair list is ``[["a", 1], ["b", 2]]`` and partitions nest once more.
    """
    text, source = read_text(text)
    obj = _load_json(text, source)
    flat: list | None = None
    parts: list | None = None
    if isinstance(obj, dict) and set(obj) == {"values"}:
        flat = obj["values"]
    elif isinstance(obj, dict) and set(obj) == {"partitions"}:
        parts = obj["partitions"]
    elif isinstance(obj, list):
        nested = bool(obj) and all(isinstance(x, list) for x in obj)
        if pairs:
            # a pair is itself an array, so partitions of pairs nest one level deeper
            nested = nested and all(isinstance(y, (list, dict)) for x in obj for y in x)
        if nested:
            parts = obj
        else:
            flat = obj
    else:
        raise ParseError("input must be a JSON array or an object with 'values' or 'partitions'", source=source)
    if parts is not None and not (isinstance(parts, list) and all(isinstance(p, list) for p in parts)):
        raise ParseError("partitions must be an array of arrays", source=source)
    if flat is not None and not isinstance(flat, list):
        raise ParseError("values must be an array", source=source)

    def conv(x, where):
        return _as_pair(x, where, source) if pairs else from_json(x)

    if parts is not None:
        rdd = make_rdd([conv(x, f"partition {i} element {j}") for j, x in enumerate(p)] for i, p in enumerate(parts))
        return ParsedInput(tuple(x for p in rdd for x in p), rdd)
    return ParsedInput(tuple(conv(x, f"element {j}") for j, x in enumerate(flat)))


def parse_value(text: str) -> Any:
    """One Value from JSON text; ``none`` is accepted for the absent optional."""
    if text.strip().lower() == "none":
        return None
    return from_json(_load_json(text, None))


# graphs ------------------------------------------------------------------


def _field(raw: str) -> Any:
    raw = raw.strip()
    if raw == "":
        return None
    try:
        return from_json(json.loads(raw))
    except (json.JSONDecodeError, ParseError):
        return raw


def _vertex_id(raw: str, line: int, col: int, source: str | None) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ParseError(f"row {line}: vertex id {raw.strip()!r} is not an integer", line=line, column=col,
                         source=source) from None


def _rows(text: str):
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield n, line.rstrip("\r\n").split("\t")


def parse_edges(text: str, source: str | None = None) -> list[Edge]:
    """``src<TAB>dst[<TAB>attr]`` per row; blank rows and ``#`` comments are skipped."""
    edges = []
    for n, cols in _rows(text):
        if len(cols) not in (2, 3):
            raise ParseError(f"row {n}: expected src<TAB>dst[<TAB>attr], got {len(cols)} field(s)", line=n,
                             source=source)
        src = _vertex_id(cols[0], n, 1, source)
        dst = _vertex_id(cols[1], n, len(cols[0]) + 2, source)
        edges.append(Edge(src, dst, _field(cols[2]) if len(cols) == 3 else None))
    return edges


def parse_vertices(text: str, source: str | None = None) -> list[tuple[int, Any]]:
    out = []
    for n, cols in _rows(text):
        if len(cols) not in (1, 2):
            raise ParseError(f"row {n}: expected id[<TAB>attr], got {len(cols)} field(s)", line=n, source=source)
        out.append((_vertex_id(cols[0], n, 1, source), _field(cols[1]) if len(cols) == 2 else None))
    return out


def load_graph(edges: str, vertices: str | None = None, *, default_attr: Any = None, vertex_parts: int = 1,
               edge_parts: int = 1) -> GraphRdd:
    """Graph from an edge TSV and optional vertex TSV, each a path or literal text."""
    etext, esrc = read_text(edges)
    es = parse_edges(etext, esrc)
    vs = None
    if vertices is not None:
        vtext, vsrc = read_text(vertices)
        vs = parse_vertices(vtext, vsrc)
    try:
        return build_graph(es, vs, default_attr=default_attr, vertex_parts=vertex_parts, edge_parts=edge_parts)
    except DuplicateVertex as e:
        raise ParseError(str(e), source=vertices) from None
