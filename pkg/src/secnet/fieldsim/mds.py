"""Cauchy MDS matrices over GF(2^m)."""

from __future__ import annotations

import numpy as np

from .gf import GF, field


class FieldTooSmallError(ValueError):
    def __init__(self, rows: int, cols: int, gf: GF) -> None:
        super().__init__(f"a {rows}x{cols} Cauchy matrix needs {rows + cols} distinct points but {gf} has {gf.order}")
        self.rows = rows
        self.cols = cols


def mds_matrix(rows: int, cols: int, gf: GF | None = None) -> np.ndarray:
    """``rows x cols`` matrix whose every square submatrix is invertible.

    Entry ``(i, j)`` is ``1 / (x_i + y_j)`` with ``x_i = i`` and ``y_j = rows + j``.
    """
    gf = gf or field(8)
    if rows < 0 or cols < 0:
        raise ValueError("dimensions must be nonnegative")
    if rows + cols > gf.order:
        raise FieldTooSmallError(rows, cols, gf)
    x = np.arange(rows, dtype=np.int64)[:, None]
    y = np.arange(rows, rows + cols, dtype=np.int64)[None, :]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.int64)
    return gf.inv(x ^ y)
