"""Center-point detection from row/column variances and texture of the
16x16 window around it, for each of the four sub-bands."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .texture import GlcmConfig, quantize_window, texture_of

CENTER_WINDOW = 16


class CenterPoint(NamedTuple):
    row: int
    col: int
    row_variance: float
    col_variance: float


def row_col_stats(plane):
    """Population mean and variance of every row and every column.

    Returns (row_means, row_vars, col_means, col_vars).
    """
    d = np.asarray(plane, dtype=np.float64)
    if d.ndim != 2 or d.size == 0:
        raise ValueError("plane must be a non-empty 2-D matrix")
    row_means = d.mean(axis=1)
    col_means = d.mean(axis=0)
    row_vars = ((d - row_means[:, None]) ** 2).mean(axis=1)
    col_vars = ((d - col_means[None, :]) ** 2).mean(axis=0)
    return row_means, row_vars, col_means, col_vars


def find_center(plane) -> CenterPoint:
    # np.argmax returns the first maximum, i.e. ties go to the smallest index
    _, row_vars, _, col_vars = row_col_stats(plane)
    r = int(np.argmax(row_vars))
    c = int(np.argmax(col_vars))
    return CenterPoint(r, c, float(row_vars[r]), float(col_vars[c]))


def window_bounds(center: int, length: int, size: int = CENTER_WINDOW):
    """[start, stop) of a size-long window centered on ``center``, shifted to fit."""
    if length <= size:
        return 0, length
    start = min(max(center - size // 2, 0), length - size)
    return start, start + size


def center_window(plane, size: int = CENTER_WINDOW) -> np.ndarray:
    plane = np.asarray(plane, dtype=np.float64)
    cp = find_center(plane)
    r0, r1 = window_bounds(cp.row, plane.shape[0], size)
    c0, c1 = window_bounds(cp.col, plane.shape[1], size)
    return plane[r0:r1, c0:c1]


def center_features(bands, cfg: GlcmConfig = GlcmConfig()) -> list:
    """Sixteen values: [corr, contrast, homog, energy] for LL, LH, HL, HH in turn."""
    out = []
    for _, plane in bands.bands():
        win = center_window(plane)
        out.extend(texture_of(quantize_window(win, cfg.levels), cfg).as_list())
    return out
