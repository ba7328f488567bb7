"""Gray-level co-occurrence matrices and four Haralick-style features.

Gray levels are indexed 0..L-1. Contrast, energy and homogeneity only
depend on i - j and correlation is shift-invariant, so this agrees with a
1..L indexing of the same sums.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadRange, NoPairs


@dataclass(frozen=True)
class GlcmConfig:
    levels: int = 8
    offset: tuple = (0, 1)
    symmetric: bool = True

    def __post_init__(self):
        if self.levels < 2:
            raise ValueError("glcm.levels must be >= 2")
        object.__setattr__(self, "offset", tuple(int(v) for v in self.offset))


@dataclass(frozen=True, eq=False)
class Glcm:
    p: np.ndarray
    offset: tuple
    symmetric: bool

    @property
    def levels(self) -> int:
        return self.p.shape[0]


@dataclass(frozen=True)
class TextureFeatures:
    correlation: float
    contrast: float
    energy: float
    homogeneity: float

    def as_list(self, nan_to_zero: bool = True) -> list:
        """[correlation, contrast, homogeneity, energy] -- feature-vector order."""
        corr = self.correlation
        if nan_to_zero and np.isnan(corr):
            corr = 0.0
        return [corr, self.contrast, self.homogeneity, self.energy]


def quantize(matrix, levels: int, value_range) -> np.ndarray:
    """Map values in [lo, hi] onto integer bins 0..levels-1 (clamping outside values)."""
    lo, hi = (float(v) for v in value_range)
    if not lo < hi:
        raise BadRange(f"need lo < hi, got ({lo}, {hi})")
    if levels < 2:
        raise BadRange(f"need at least 2 levels, got {levels}")
    v = np.clip(np.asarray(matrix, dtype=np.float64), lo, hi)
    q = np.floor(levels * (v - lo) / (hi - lo)).astype(np.int64)
    return np.minimum(q, levels - 1)


def quantize_window(matrix, levels: int) -> np.ndarray:
    """Quantize over the matrix's own (min, max); a flat matrix is all bin 0."""
    m = np.asarray(matrix, dtype=np.float64)
    lo, hi = m.min(), m.max()
    if lo == hi:
        return np.zeros(m.shape, dtype=np.int64)
    return quantize(m, levels, (lo, hi))


def glcm(q, levels: int, offset=(0, 1), symmetric: bool = True) -> Glcm:
    q = np.asarray(q)
    if q.ndim != 2:
        raise ValueError("glcm needs a 2-D matrix")
    if q.size and (q.min() < 0 or q.max() >= levels):
        raise ValueError(f"gray levels must lie in [0, {levels})")
    dy, dx = offset
    rows, cols = q.shape
    r0, r1 = max(0, -dy), min(rows, rows - dy)
    c0, c1 = max(0, -dx), min(cols, cols - dx)
    if r1 <= r0 or c1 <= c0:
        raise NoPairs(f"no pixel pairs at offset {offset} in a {rows}x{cols} matrix")
    a = q[r0:r1, c0:c1].ravel()
    b = q[r0 + dy:r1 + dy, c0 + dx:c1 + dx].ravel()
    counts = np.bincount(a * levels + b, minlength=levels * levels).reshape(levels, levels)
    counts = counts.astype(np.float64)
    if symmetric:
        counts = counts + counts.T
    p = counts / counts.sum()
    return Glcm(p, (dy, dx), symmetric)


def features(g: Glcm) -> TextureFeatures:
    p = g.p
    i = np.arange(p.shape[0], dtype=np.float64)
    pi = p.sum(axis=1)
    pj = p.sum(axis=0)
    mu_i = i @ pi
    mu_j = i @ pj
    var_i = ((i - mu_i) ** 2) @ pi
    var_j = ((i - mu_j) ** 2) @ pj
    diff = i[:, None] - i[None, :]
    contrast = float(np.sum(diff ** 2 * p))
    energy = float(np.sum(p ** 2))
    homogeneity = float(np.sum(p / (1.0 + np.abs(diff))))
    sigma = np.sqrt(var_i) * np.sqrt(var_j)
    if sigma == 0:
        correlation = float("nan")
    else:
        cov = (i - mu_i) @ p @ (i - mu_j)
        correlation = float(np.clip(cov / sigma, -1.0, 1.0))
    return TextureFeatures(correlation, contrast, energy, homogeneity)


# Feature values of any single-cell GLCM (a flat matrix).
FLAT_TEXTURE = TextureFeatures(float("nan"), 0.0, 1.0, 1.0)


def texture_of(q, cfg: GlcmConfig) -> TextureFeatures:
    """Features of q's GLCM. A matrix too small to hold one pixel pair at the
    configured offset is scored as flat."""
    try:
        return features(glcm(q, cfg.levels, cfg.offset, cfg.symmetric))
    except NoPairs:
        return FLAT_TEXTURE
