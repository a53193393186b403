"""
Reader and writer for the psybracket text format.

    psybracket n=3
    [c]
    1 3 2          <- matrix 1, row 1
    ...            (n blocks of n rows, blocks separated by blank lines)
    [p]
    ...

Lines starting with `;` are comments.
"""

import logging
import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from algebra import PsyBracket, PsyError, TernaryTensor

logger = logging.getLogger(__name__)

_HEADER = re.compile(r"^psybracket\s+n=(\d+)\s*$")


class FormatError(PsyError):
    """Raised when a data file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, source: str = ""):
        self.line = line
        self.source = source
        where = f"{source}:" if source else ""
        where += f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


def _read_section(
    rows: List[Tuple[int, List[str]]], n: int, label: str, source: str
) -> TernaryTensor:
    if len(rows) != n * n:
        line = rows[-1][0] if rows else None
        raise FormatError(
            f"section [{label}] needs {n * n} rows, found {len(rows)}", line, source
        )
    values = []
    for lineno, tokens in rows:
        if len(tokens) != n:
            raise FormatError(f"expected {n} entries, found {len(tokens)}", lineno, source)
        row = []
        for token in tokens:
            try:
                value = int(token)
            except ValueError:
                raise FormatError(f"not an integer: {token!r}", lineno, source)
            if not 1 <= value <= n:
                raise FormatError(f"entry {value} outside 1..{n}", lineno, source)
            row.append(value)
        values.append(row)
    cells = np.array(values, dtype=np.int64).reshape(n, n, n) - 1
    return TernaryTensor(n=n, cells=cells)


def parse_psybracket(text: str, name: str = "", source: str = "") -> PsyBracket:
    """
    Parse a psybracket from text.

    Only the format is checked here; axioms are left to check_axioms.

    Raises:
        FormatError: on syntax errors, with the offending line number
    """
    lines = text.splitlines()
    n = None
    section = None
    sections = {"c": [], "p": []}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if n is None:
            match = _HEADER.match(line)
            if not match:
                raise FormatError("expected header 'psybracket n=<N>'", lineno, source)
            n = int(match.group(1))
            if n < 1:
                raise FormatError("carrier size must be positive", lineno, source)
            continue
        if line in ("[c]", "[p]"):
            section = line[1]
            if sections[section]:
                raise FormatError(f"duplicate section {line}", lineno, source)
            continue
        if section is None:
            raise FormatError("entries before the [c] section", lineno, source)
        sections[section].append((lineno, line.split()))

    if n is None:
        raise FormatError("empty file", None, source)
    for label in ("c", "p"):
        if not sections[label]:
            raise FormatError(f"missing section [{label}]", None, source)
    tc = _read_section(sections["c"], n, "c", source)
    tp = _read_section(sections["p"], n, "p", source)
    return PsyBracket(tc=tc, tp=tp, name=name)


def _format_tensor(t: TernaryTensor) -> List[str]:
    blocks = []
    for matrix in t.entries():
        blocks.append("\n".join(" ".join(str(v) for v in row) for row in matrix))
    return "\n\n".join(blocks).split("\n")


def serialize_psybracket(x: PsyBracket) -> str:
    """Render a psybracket in the text format, ending with a newline."""
    lines = [f"psybracket n={x.n}", "[c]"]
    lines += _format_tensor(x.tc)
    lines += ["", "[p]"]
    lines += _format_tensor(x.tp)
    return "\n".join(lines) + "\n"


def load_psybracket(path: Union[str, Path]) -> PsyBracket:
    """Read a .psy file; the file stem becomes the psybracket's name."""
    path = Path(path)
    logger.debug(f"Loading psybracket from {path}")
    return parse_psybracket(path.read_text(), name=path.stem, source=str(path))


def load_psybracket_dir(directory: Union[str, Path]) -> List[PsyBracket]:
    """All .psy files in a directory, sorted by name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"Psybracket directory not found at: {directory}")
    return [load_psybracket(p) for p in sorted(directory.glob("*.psy"))]


def save_psybracket(x: PsyBracket, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize_psybracket(x))
