"""Reader and writer for the ``alist`` sparse parity-check format.

Layout::

    n m
    max_col_weight max_row_weight
    <n column weights>
    <m row weights>
    <n lines: 1-based row indices of each column, zero padded>
    <m lines: 1-based column indices of each row, zero padded>
"""

from __future__ import annotations

from pathlib import Path

from .f2core import BitMatrix, support


class AlistError(ValueError):
    pass


def dumps(H: BitMatrix) -> str:
    m, n = H.shape
    cols = [support(H.column(j)) for j in range(n)]
    rows = [support(r) for r in H.rows]
    max_col = max((len(c) for c in cols), default=0)
    max_row = max((len(r) for r in rows), default=0)

    def padded(idx: list[int], width: int) -> str:
        vals = [i + 1 for i in idx] + [0] * (width - len(idx))
        return " ".join(str(v) for v in vals)

    lines = [f"{n} {m}", f"{max_col} {max_row}"]
    lines.append(" ".join(str(len(c)) for c in cols))
    lines.append(" ".join(str(len(r)) for r in rows))
    lines.extend(padded(c, max_col) for c in cols)
    lines.extend(padded(r, max_row) for r in rows)
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise AlistError(f"line {lineno}: non-integer token") from exc


def loads(text: str) -> BitMatrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 4:
        raise AlistError("alist needs at least four header lines")
    header = _ints(lines[0], 1)
    if len(header) != 2 or min(header) < 0:
        raise AlistError("line 1 must be 'n m'")
    n, m = header
    if len(lines) != 4 + n + m:
        raise AlistError(f"expected {4 + n + m} lines for n={n}, m={m}, got {len(lines)}")
    maxw = _ints(lines[1], 2)
    if len(maxw) != 2:
        raise AlistError("line 2 must hold two maximum weights")
    col_w = _ints(lines[2], 3)
    row_w = _ints(lines[3], 4)
    if len(col_w) != n or len(row_w) != m:
        raise AlistError("weight lists disagree with n, m")

    rows = [0] * m
    for j in range(n):
        idx = [i for i in _ints(lines[4 + j], 5 + j) if i != 0]
        if len(idx) != col_w[j] or any(i < 1 or i > m for i in idx):
            raise AlistError(f"column {j + 1}: bad index list")
        for i in idx:
            rows[i - 1] |= 1 << j
    for i in range(m):
        idx = [c for c in _ints(lines[4 + n + i], 5 + n + i) if c != 0]
        if len(idx) != row_w[i] or any(c < 1 or c > n for c in idx):
            raise AlistError(f"row {i + 1}: bad index list")
        check = 0
        for c in idx:
            check |= 1 << (c - 1)
        if check != rows[i]:
            raise AlistError(f"row {i + 1} disagrees with the column lists")
    if maxw != [max(col_w, default=0), max(row_w, default=0)]:
        raise AlistError("line 2 maximum weights are inconsistent")
    return BitMatrix(m, n, tuple(rows))


def read(path: str | Path) -> BitMatrix:
    return loads(Path(path).read_text())


def write(H: BitMatrix, path: str | Path) -> None:
    Path(path).write_text(dumps(H))
