"""Canny edge detection and per-band edge statistics.

Steps: separable Gaussian smoothing (radius ceil(3 sigma), replicated
borders) -> Sobel gradients -> non-maximum suppression along the gradient
direction quantized to 0/45/90/135 degrees -> hysteresis with 8-connected
growth from strong seeds. Thresholds are fractions of the largest gradient
magnitude in the plane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import PlaneTooSmall

TAN_22_5 = math.sqrt(2.0) - 1.0

# (dy, dx) step along the gradient for each direction bin
DIRECTION_STEPS = {0: (0, 1), 45: (1, 1), 90: (1, 0), 135: (1, -1)}


@dataclass(frozen=True)
class CannyConfig:
    sigma: float = 1.0
    t_low: float = 0.1
    t_high: float = 0.3

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"canny.sigma must be > 0, got {self.sigma}")
        if not 0 <= self.t_low < self.t_high:
            raise ValueError(f"need 0 <= t_low < t_high, got {self.t_low}, {self.t_high}")


@dataclass(frozen=True, eq=False)
class EdgeMap:
    mask: np.ndarray
    grad_mag: np.ndarray


def gaussian_kernel(sigma: float) -> np.ndarray:
    # scalar libm exp and a left-to-right sum keep the kernel reproducible bit for bit
    radius = math.ceil(3 * sigma)
    k = [math.exp(-(x * x) / (2.0 * sigma * sigma)) for x in range(-radius, radius + 1)]
    total = sum(k)
    return np.array([v / total for v in k])


def _smooth_axis(a: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    r = kernel.size // 2
    n = a.shape[axis]
    pad = [(0, 0), (0, 0)]
    pad[axis] = (r, r)
    padded = np.pad(a, pad, mode="edge")
    out = np.zeros_like(a)
    for t, w in enumerate(kernel):
        sl = [slice(None), slice(None)]
        sl[axis] = slice(t, t + n)
        out += w * padded[tuple(sl)]
    return out


def smooth(plane: np.ndarray, sigma: float) -> np.ndarray:
    k = gaussian_kernel(sigma)
    return _smooth_axis(_smooth_axis(plane, k, 1), k, 0)


def sobel(z: np.ndarray):
    p = np.pad(z, 1, mode="edge")
    rows, cols = z.shape

    def at(dy, dx):
        return p[1 + dy:1 + dy + rows, 1 + dx:1 + dx + cols]

    gx = (at(-1, 1) + 2.0 * at(0, 1) + at(1, 1)) - (at(-1, -1) + 2.0 * at(0, -1) + at(1, -1))
    gy = (at(1, -1) + 2.0 * at(1, 0) + at(1, 1)) - (at(-1, -1) + 2.0 * at(-1, 0) + at(-1, 1))
    return gx, gy


def direction_bins(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Gradient direction folded to [0, 180) degrees and binned to 0/45/90/135."""
    ax, ay = np.abs(gx), np.abs(gy)
    diag = np.where((gx > 0) == (gy > 0), 45, 135)
    return np.where(ay <= TAN_22_5 * ax, 0, np.where(ax <= TAN_22_5 * ay, 90, diag))


def non_max_suppression(mag: np.ndarray, bins: np.ndarray) -> np.ndarray:
    """Keep pixels that beat the neighbor behind them and tie-or-beat the one ahead.

    The asymmetric tie rule leaves exactly one pixel on a symmetric ridge.
    Border pixels are never kept.
    """
    rows, cols = mag.shape
    keep = np.zeros(mag.shape, dtype=bool)
    inner = mag[1:-1, 1:-1]
    for b, (dy, dx) in DIRECTION_STEPS.items():
        ahead = mag[1 + dy:rows - 1 + dy, 1 + dx:cols - 1 + dx]
        behind = mag[1 - dy:rows - 1 - dy, 1 - dx:cols - 1 - dx]
        sel = (bins[1:-1, 1:-1] == b) & (inner > 0) & (inner >= ahead) & (inner > behind)
        keep[1:-1, 1:-1] |= sel
    return keep


def hysteresis(mag: np.ndarray, candidates: np.ndarray, low: float, high: float) -> np.ndarray:
    weak = candidates & (mag >= low)
    strong = weak & (mag >= high)
    labels, count = ndimage.label(weak, structure=np.ones((3, 3), dtype=bool))
    if count == 0:
        return np.zeros(mag.shape, dtype=bool)
    seeded = np.zeros(count + 1, dtype=bool)
    seeded[labels[strong]] = True
    seeded[0] = False
    return seeded[labels]


def canny(plane, cfg: CannyConfig = CannyConfig()) -> EdgeMap:
    z = np.asarray(plane, dtype=np.float64)
    if z.ndim != 2 or z.shape[0] < 3 or z.shape[1] < 3:
        raise PlaneTooSmall(f"canny needs at least 3x3, got shape {z.shape}")
    gx, gy = sobel(smooth(z, cfg.sigma))
    mag = np.sqrt(gx * gx + gy * gy)
    peak = mag.max()
    if peak == 0:
        return EdgeMap(np.zeros(z.shape, dtype=bool), mag)
    thin = non_max_suppression(mag, direction_bins(gx, gy))
    mask = hysteresis(mag, thin, cfg.t_low * peak, cfg.t_high * peak)
    return EdgeMap(mask, mag)


def edge_stats(edges: EdgeMap):
    """(edge density, mean gradient magnitude over edge pixels or 0)."""
    n = int(edges.mask.sum())
    density = n / edges.mask.size
    mean_mag = float(edges.grad_mag[edges.mask].mean()) if n else 0.0
    return density, mean_mag


def edge_features(bands, cfg: CannyConfig = CannyConfig()) -> list:
    """Eight values: (density, mean edge magnitude) for LL, LH, HL, HH."""
    out = []
    for _, plane in bands.bands():
        out.extend(edge_stats(canny(plane, cfg)))
    return out
