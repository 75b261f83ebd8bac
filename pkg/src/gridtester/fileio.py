"""Plain-text function files.

Line 1 is ``"n k"``; then exactly ``k**n`` lines, one exact value each
(``p``, ``p/q``, ``+inf`` or ``-inf``) in lexicographic point order.  UTF-8,
LF line endings, no blank lines at the end.
"""
from __future__ import annotations

import re
from pathlib import Path

from .errors import UsageError
from .grid import Hypergrid
from .table import FunctionTable
from .values import DualValue, format_value, parse_value

_HEADER = re.compile(r"^(\d+) (\d+)$")


def parse_function(text: str) -> FunctionTable:
    if "\r" in text:
        raise UsageError("line 1: CR characters are not allowed (use LF line endings)")
    if not text.endswith("\n"):
        raise UsageError("file must end with a newline")
    lines = text[:-1].split("\n")
    m = _HEADER.match(lines[0])
    if not m:
        raise UsageError(f"line 1: expected 'n k', got {lines[0]!r}")
    n, k = int(m.group(1)), int(m.group(2))
    if n < 1 or k < 1:
        raise UsageError("line 1: n and k must be positive")
    grid = Hypergrid(n, k)
    body = lines[1:]
    if len(body) != grid.size:
        raise UsageError(f"line {len(lines) + 1}: expected {grid.size} values, found {len(body)}")
    values = []
    for lineno, token in enumerate(body, start=2):
        if token != token.strip() or not token:
            raise UsageError(f"line {lineno}: stray whitespace or empty line")
        try:
            values.append(parse_value(token))
        except UsageError as exc:
            raise UsageError(f"line {lineno}: {exc}") from None
    return FunctionTable(grid, tuple(values))


def emit_function(f: FunctionTable) -> str:
    if any(isinstance(v, DualValue) for v in f.values):
        raise UsageError("perturbed tables cannot be written to a function file")
    out = [f"{f.grid.n} {f.grid.k}"]
    out += [format_value(v) for v in f.values]
    return "\n".join(out) + "\n"


def read_function(path: str | Path) -> FunctionTable:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise UsageError(f"{path}: not valid UTF-8") from None
    try:
        return parse_function(text)
    except UsageError as exc:
        raise UsageError(f"{path}: {exc}") from None


def write_function(f: FunctionTable, path: str | Path) -> None:
    Path(path).write_bytes(emit_function(f).encode("utf-8"))
