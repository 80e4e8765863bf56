"""Plain-text matrix files.

Grammar (exact)::

    file   := header NEWLINE row*
    header := "matrix" SP nat SP nat          # rows, cols
    row    := entry (SP entry)* NEWLINE
    entry  := rat | rat "," rat               # second component = imaginary part
    rat    := ["-"] digits ["/" nonzero-digits]

``#`` starts a comment running to the end of the line; blank lines are
ignored.  Input rationals need not be in lowest terms; everything printed by
``format_matrix`` is canonical (lowest terms, positive denominator), and
parse(format(M)) always reproduces M exactly.
"""

from __future__ import annotations

import re

from gmpy2 import mpq

from .errors import ParseError
from .eigenstructure import ExactMatrix
from .exactpoly import GaussianRational

_TOKEN = re.compile(r"\S+")
_NAT = re.compile(r"\d+\Z")
_RAT = re.compile(r"(-?\d+)(?:/(\d+))?\Z")


def _parse_rat(text: str, line: int, column: int) -> mpq:
    m = _RAT.match(text)
    if not m:
        raise ParseError(f"malformed rational {text!r}", line, column, text)
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}", line, column, text)
    return mpq(int(num), int(den) if den is not None else 1)


def _parse_entry(token: str, line: int, column: int) -> GaussianRational:
    if token.count(",") > 1:
        raise ParseError(f"malformed entry {token!r}", line, column, token)
    if "," in token:
        re_text, im_text = token.split(",")
        if not re_text or not im_text:
            raise ParseError(f"malformed entry {token!r}", line, column, token)
        return GaussianRational(
            _parse_rat(re_text, line, column),
            _parse_rat(im_text, line, column + len(re_text) + 1),
        )
    return GaussianRational(_parse_rat(token, line, column))


def parse_matrix(text: str) -> ExactMatrix:
    """Parse the matrix file grammar; errors carry line/column/token."""
    header: tuple[int, int] | None = None
    rows: list[list[GaussianRational]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(content)]
        if not tokens:
            continue
        if header is None:
            if tokens[0][0] != "matrix":
                raise ParseError(
                    f"expected header 'matrix <rows> <cols>', found {tokens[0][0]!r}",
                    lineno, tokens[0][1], tokens[0][0],
                )
            if len(tokens) != 3:
                raise ParseError(
                    "header must be exactly 'matrix <rows> <cols>'",
                    lineno, tokens[min(3, len(tokens)) - 1][1], tokens[-1][0],
                )
            dims = []
            for tok, col in tokens[1:]:
                if not _NAT.match(tok) or int(tok) == 0:
                    raise ParseError(
                        f"dimension must be a positive integer, got {tok!r}",
                        lineno, col, tok,
                    )
                dims.append(int(tok))
            header = (dims[0], dims[1])
            continue
        if len(rows) == header[0]:
            raise ParseError(
                f"trailing content after {header[0]} rows",
                lineno, tokens[0][1], tokens[0][0],
            )
        if len(tokens) != header[1]:
            raise ParseError(
                f"row {len(rows) + 1} has {len(tokens)} entries, expected {header[1]}",
                lineno, tokens[-1][1] if len(tokens) > header[1] else len(content) + 1,
                tokens[-1][0] if tokens else "",
            )
        rows.append([_parse_entry(tok, lineno, col) for tok, col in tokens])
    if header is None:
        raise ParseError("empty input: missing 'matrix <rows> <cols>' header", 1, 1)
    if len(rows) != header[0]:
        raise ParseError(
            f"expected {header[0]} rows, found {len(rows)}",
            len(text.splitlines()) + 1, 1,
        )
    return ExactMatrix.from_rows(rows)


def format_entry(value: GaussianRational) -> str:
    if value.im:
        return f"{value.re},{value.im}"
    return str(value.re)


def format_matrix(matrix: ExactMatrix, comments: tuple[str, ...] = ()) -> str:
    """Render a matrix in the file grammar (canonical lowest-term entries)."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"matrix {matrix.rows} {matrix.cols}")
    for i in range(matrix.rows):
        lines.append(" ".join(format_entry(e) for e in matrix.row(i)))
    return "\n".join(lines) + "\n"


def load_matrix(path) -> ExactMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def save_matrix(path, matrix: ExactMatrix, comments: tuple[str, ...] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(matrix, comments))
