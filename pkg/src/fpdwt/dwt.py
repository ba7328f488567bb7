"""Separable 2-D Daubechies DWT with ceil-sized sub-bands.

Axis convention: the first letter of a band name is the filter applied
along x (columns), the second the filter along y (rows). HL is therefore
high-pass across x and carries horizontal detail; LH carries vertical
detail.

Boundary modes:
  symmetric  half-sample reflection (..., x1, x0 | x0, x1, ...)
  periodic   wrap-around; orthogonal for even lengths

Each axis uses ceil(n/2) low and ceil(n/2) high coefficients. The
analysis operator for one axis is a (2*ceil(n/2)) x n matrix of full
column rank in both modes, so the inverse is its pseudo-inverse
(the transpose in periodic mode with even n).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, EmptyInput, ImageTooSmall

# Scaling (low-pass) coefficients, normalized so that sum == sqrt(2).
# Values agree with the standard Daubechies tables (e.g. Daubechies 1992,
# Table 6.1) to the digits shown.
WAVELETS = {
    "db1": np.array([0.70710678118654752, 0.70710678118654752]),
    "db2": np.array([
        0.48296291314453414, 0.83651630373780791,
        0.22414386804201338, -0.12940952255126038,
    ]),
    "db4": np.array([
        0.23037781330889650, 0.71484657055291565,
        0.63088076792985891, -0.02798376941685985,
        -0.18703481171909308, 0.03084138183556076,
        0.03288301166688520, -0.01059740178506903,
    ]),
}
MODES = ("symmetric", "periodic")


def filter_pair(wavelet: str):
    """Return (low, high) analysis filters; high is the quadrature mirror of low."""
    try:
        lo = WAVELETS[wavelet]
    except KeyError:
        raise ValueError(f"unknown wavelet {wavelet!r}; choose from {sorted(WAVELETS)}") from None
    n = np.arange(lo.size)
    hi = (-1.0) ** n * lo[::-1]
    return lo, hi


@lru_cache(maxsize=None)
def _taps(n: int, length: int, mode: str) -> np.ndarray:
    """Source index for every (output k, tap t): sample 2k + length/2 - t, folded."""
    k = np.arange((n + 1) // 2)[:, None]
    t = np.arange(length)[None, :]
    idx = 2 * k + length // 2 - t
    if mode == "symmetric":
        idx = np.mod(idx, 2 * n)
        idx = np.where(idx >= n, 2 * n - 1 - idx, idx)
    elif mode == "periodic":
        idx = np.mod(idx, n)
    else:
        raise ValueError(f"unknown boundary mode {mode!r}")
    idx.setflags(write=False)
    return idx


@lru_cache(maxsize=64)
def analysis_matrix(n: int, wavelet: str, mode: str) -> np.ndarray:
    lo, hi = filter_pair(wavelet)
    idx = _taps(n, lo.size, mode)
    half = idx.shape[0]
    w = np.zeros((2 * half, n))
    rows = np.repeat(np.arange(half), lo.size)
    np.add.at(w, (rows, idx.ravel()), np.tile(lo, half))
    np.add.at(w, (rows + half, idx.ravel()), np.tile(hi, half))
    w.setflags(write=False)
    return w


@lru_cache(maxsize=64)
def synthesis_matrix(n: int, wavelet: str, mode: str) -> np.ndarray:
    s = np.linalg.pinv(analysis_matrix(n, wavelet, mode))
    s.setflags(write=False)
    return s


def _analyze_last_axis(x, lo, hi, mode):
    idx = _taps(x.shape[-1], lo.size, mode)
    gathered = x[..., idx]
    return gathered @ lo, gathered @ hi


@dataclass(frozen=True, eq=False)
class SubbandSet:
    level: int
    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray

    def __post_init__(self):
        shapes = {b.shape for b in (self.ll, self.lh, self.hl, self.hh)}
        if len(shapes) != 1:
            raise DimensionMismatch(f"sub-band shapes differ: {sorted(shapes)}")

    @property
    def shape(self):
        return self.ll.shape

    def bands(self):
        """(name, plane) pairs in LL, LH, HL, HH order."""
        return [("LL", self.ll), ("LH", self.lh), ("HL", self.hl), ("HH", self.hh)]


@dataclass(frozen=True, eq=False)
class SubbandPyramid:
    levels: tuple
    original_size: tuple  # (width, height)
    wavelet_id: str


def dwt2_single(image, wavelet: str = "db2", mode: str = "symmetric", level: int = 1) -> SubbandSet:
    x = np.asarray(image, dtype=np.float64)
    if x.ndim != 2 or x.size == 0:
        raise EmptyInput(f"need a non-empty 2-D matrix, got shape {x.shape}")
    lo, hi = filter_pair(wavelet)
    # along x (columns) first, then along y (rows)
    xl, xh = _analyze_last_axis(x, lo, hi, mode)
    ll, lh = _analyze_last_axis(xl.T, lo, hi, mode)
    hl, hh = _analyze_last_axis(xh.T, lo, hi, mode)
    return SubbandSet(level, ll.T.copy(), lh.T.copy(), hl.T.copy(), hh.T.copy())


def idwt2_single(bands: SubbandSet, wavelet: str = "db2", target_size=None,
                 mode: str = "symmetric") -> np.ndarray:
    """Invert dwt2_single. ``target_size`` is (width, height)."""
    rows, cols = bands.shape
    if target_size is None:
        width, height = 2 * cols, 2 * rows
    else:
        width, height = target_size
    if (width + 1) // 2 != cols or (height + 1) // 2 != rows:
        raise DimensionMismatch(
            f"target {width}x{height} inconsistent with {cols}x{rows} sub-bands")
    sy = synthesis_matrix(height, wavelet, mode)
    sx = synthesis_matrix(width, wavelet, mode)
    xl = sy @ np.vstack([bands.ll, bands.lh])
    xh = sy @ np.vstack([bands.hl, bands.hh])
    return np.hstack([xl, xh]) @ sx.T


def decompose3(image, wavelet: str = "db2", mode: str = "symmetric") -> SubbandPyramid:
    """Three-level decomposition; each level splits the previous LL."""
    x = image.data if hasattr(image, "data") else np.asarray(image, dtype=np.float64)
    height, width = x.shape
    if height < 16 or width < 16:
        raise ImageTooSmall(f"need at least 16x16 pixels, got {width}x{height}")
    levels = []
    current = x
    for k in (1, 2, 3):
        bands = dwt2_single(current, wavelet, mode, level=k)
        levels.append(bands)
        current = bands.ll
    return SubbandPyramid(tuple(levels), (width, height), wavelet)
