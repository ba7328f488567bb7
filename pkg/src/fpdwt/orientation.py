"""Directional features: gradient field from the detail bands, windowed
coherence, block-wise dominant orientation and their GLCM textures.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BandTooSmall
from .texture import GlcmConfig, quantize, texture_of

COHERENCE_WINDOW = 5
ORIENTATION_BLOCK = 8


@dataclass(frozen=True, eq=False)
class GradientField:
    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray
    angle: np.ndarray


def gradient_angle(gx, gy) -> np.ndarray:
    """arctan(gx / gy) resolved with atan2 and folded into (-pi/2, pi/2]; 0 where gx == gy == 0."""
    theta = np.arctan2(gx, gy)
    theta = np.where(theta > np.pi / 2, theta - np.pi, theta)
    theta = np.where(theta <= -np.pi / 2, theta + np.pi, theta)
    return np.where((gx == 0) & (gy == 0), 0.0, theta)


def gradient_field(gx, gy) -> GradientField:
    gx = np.asarray(gx, dtype=np.float64)
    gy = np.asarray(gy, dtype=np.float64)
    return GradientField(gx, gy, np.abs(gx) + np.abs(gy), gradient_angle(gx, gy))


def gradient_from_subbands(bands, swap_axes: bool = False) -> GradientField:
    """gx from HL (horizontal detail), gy from LH (vertical detail) unless swapped."""
    gx, gy = (bands.lh, bands.hl) if swap_axes else (bands.hl, bands.lh)
    return gradient_field(gx, gy)


def _window_sum(a: np.ndarray, size: int) -> np.ndarray:
    """Sum over a size x size centered window; out-of-bounds neighbors are skipped."""
    r = size // 2
    padded = np.pad(a, r)
    rows, cols = a.shape
    out = np.zeros_like(a)
    for dy in range(size):
        for dx in range(size):
            out += padded[dy:dy + rows, dx:dx + cols]
    return out


def coherence(field: GradientField, window: int = COHERENCE_WINDOW) -> np.ndarray:
    """Gradient-weighted mean of cos(theta_mn - theta_ij) over each pixel's window.

    Uses cos(a - b) = cos a cos b + sin a sin b so the window sums are shared.
    Pixels whose window carries no gradient get 0.
    """
    g = field.magnitude
    th = field.angle
    total = _window_sum(g, window)
    c = _window_sum(g * np.cos(th), window)
    s = _window_sum(g * np.sin(th), window)
    num = np.cos(th) * c + np.sin(th) * s
    delta = np.divide(num, total, out=np.zeros_like(num), where=total > 0)
    return np.clip(delta, -1.0, 1.0)


def dominant_orientation(field: GradientField, coh, block: int = ORIENTATION_BLOCK) -> np.ndarray:
    """Per non-overlapping block angle in [0, pi]; partial trailing blocks are dropped."""
    th = field.angle
    coh = np.asarray(coh, dtype=np.float64)
    if coh.shape != th.shape:
        raise ValueError(f"coherence shape {coh.shape} != gradient shape {th.shape}")
    by, bx = th.shape[0] // block, th.shape[1] // block
    w = coh[:by * block, :bx * block] ** 2
    t2 = 2.0 * th[:by * block, :bx * block]

    def block_sum(a):
        return a.reshape(by, block, bx, block).sum(axis=(1, 3))

    num = block_sum(w * np.sin(t2))
    den = block_sum(w * np.cos(t2))
    theta = 0.5 * np.arctan2(num, den) + np.pi / 2
    return np.clip(theta, 0.0, np.pi)


def directional_features(bands, cfg: GlcmConfig = GlcmConfig(), swap_axes: bool = False) -> list:
    """Eight values: texture of the coherence map, then of the orientation map.

    Each group is [correlation, contrast, homogeneity, energy]; an undefined
    correlation (flat map) is emitted as 0.
    """
    rows, cols = bands.shape
    if rows < ORIENTATION_BLOCK or cols < ORIENTATION_BLOCK:
        raise BandTooSmall(f"level {bands.level} band is {cols}x{rows}; need at least 8x8")
    field = gradient_from_subbands(bands, swap_axes)
    coh = coherence(field)
    theta = dominant_orientation(field, coh)
    out = texture_of(quantize(coh, cfg.levels, (-1.0, 1.0)), cfg).as_list()
    return out + texture_of(quantize(theta, cfg.levels, (0.0, np.pi)), cfg).as_list()
