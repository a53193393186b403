"""
Reader and writer for the line-oriented `.pkd` diagram format.

    pseudodiagram 3_1.3
    loops 0                 (optional)
    crossing a #            (+, - or # for a precrossing)
    edge b.2 a.1            (tail crossing.slot, head crossing.slot)

A line whose first token is `#` is a comment, as is any trailing text
starting with a `#` token after a complete record.
"""

import logging
from pathlib import Path
from typing import Dict, List, Union

from diagram import CrossingKind, Diagram, Edge, Port
from psy_format import FormatError

logger = logging.getLogger(__name__)

_KINDS = {kind.value: kind for kind in CrossingKind}


def _strip_comment(tokens: List[str], width: int) -> List[str]:
    """Drop a trailing comment that starts after the first `width` tokens."""
    if len(tokens) > width and tokens[width].startswith("#"):
        return tokens[:width]
    return tokens


def _port(token: str, lineno: int, source: str) -> Port:
    cid, dot, slot = token.rpartition(".")
    if not dot or not cid:
        raise FormatError(f"expected <crossing>.<slot>, got {token!r}", lineno, source)
    try:
        return cid, int(slot)
    except ValueError:
        raise FormatError(f"slot must be an integer in {token!r}", lineno, source)


def parse_diagram(text: str, source: str = "") -> Diagram:
    """
    Parse diagram text.

    Only syntax is checked; use diagram.validate for map-level problems.

    Raises:
        FormatError: on syntax errors, with the offending line number
    """
    name = None
    loops = 0
    kinds: Dict[str, CrossingKind] = {}
    edges: List[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "#":
            continue
        keyword = tokens[0]
        if name is None:
            tokens = _strip_comment(tokens, 2)
            if keyword != "pseudodiagram" or len(tokens) != 2:
                raise FormatError("expected header 'pseudodiagram <name>'", lineno, source)
            name = tokens[1]
        elif keyword == "loops":
            tokens = _strip_comment(tokens, 2)
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise FormatError("expected 'loops <k>' with k >= 0", lineno, source)
            loops = int(tokens[1])
        elif keyword == "crossing":
            tokens = _strip_comment(tokens, 3)
            if len(tokens) != 3 or tokens[2] not in _KINDS:
                raise FormatError("expected 'crossing <id> <+|-|#>'", lineno, source)
            if tokens[1] in kinds:
                raise FormatError(f"duplicate crossing {tokens[1]}", lineno, source)
            kinds[tokens[1]] = _KINDS[tokens[2]]
        elif keyword == "edge":
            tokens = _strip_comment(tokens, 3)
            if len(tokens) != 3:
                raise FormatError("expected 'edge <c>.<slot> <c>.<slot>'", lineno, source)
            edges.append((_port(tokens[1], lineno, source), _port(tokens[2], lineno, source)))
        else:
            raise FormatError(f"unknown record {keyword!r}", lineno, source)
    if name is None:
        raise FormatError("empty file", None, source)
    return Diagram.build(name, kinds, edges, free_loops=loops)


def serialize_diagram(d: Diagram) -> str:
    lines = [f"pseudodiagram {d.name}"]
    if d.free_loops:
        lines.append(f"loops {d.free_loops}")
    lines += [f"crossing {c.id} {c.kind.value}" for c in d.crossings]
    lines += [f"edge {t[0]}.{t[1]} {h[0]}.{h[1]}" for t, h in d.edges]
    return "\n".join(lines) + "\n"


def load_diagram(path: Union[str, Path]) -> Diagram:
    path = Path(path)
    logger.debug(f"Loading diagram from {path}")
    return parse_diagram(path.read_text(), source=str(path))


def load_diagram_dir(directory: Union[str, Path]) -> List[Diagram]:
    """All .pkd files in a directory, sorted by file name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"Diagram directory not found at: {directory}")
    return [load_diagram(p) for p in sorted(directory.glob("*.pkd"))]


def save_diagram(d: Diagram, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize_diagram(d))

