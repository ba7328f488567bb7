"""Deterministic synthetic ridge-pattern fingerprints for tests and demos.

A finger is a smooth random orientation field, sampled once per 8x8 block,
plus a ridge frequency. Its samples add a translation of at most
``max_shift`` pixels and Gaussian sensor noise, each drawn from a seed
derived from (seed, finger, sample).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import IoFailure
from .ingest import GrayImage, write_pgm

BLOCK = 8


@dataclass(frozen=True)
class SynthParams:
    width: int = 192
    height: int = 192
    # None draws a per-finger frequency in [0.07, 0.14]
    ridge_frequency: Optional[float] = None
    # None: random smooth field; a float: one global angle; an array: per-block angles
    orientation_field: Union[None, float, np.ndarray] = None
    noise_sigma: float = 12.0
    max_shift: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.width < 16 or self.height < 16:
            raise ValueError("synthetic images must be at least 16x16")
        f = self.ridge_frequency
        if f is not None and not 0 < f < 0.5:
            raise ValueError("ridge_frequency must lie in (0, 0.5) cycles/pixel")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


def _rng(*key) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(k) & (2**64 - 1) for k in key]))


def finger_model(params: SynthParams, finger: int):
    """(per-block angle map over the padded canvas, ridge frequency) of one finger."""
    rng = _rng(params.seed, finger, 0xF1)
    pad = params.max_shift
    by = -(-(params.height + 2 * pad) // BLOCK)
    bx = -(-(params.width + 2 * pad) // BLOCK)
    freq = params.ridge_frequency if params.ridge_frequency is not None else rng.uniform(0.07, 0.14)
    field = params.orientation_field
    if field is None:
        yy, xx = np.mgrid[0:by, 0:bx] / max(by, bx)
        theta = np.full((by, bx), rng.uniform(0, np.pi))
        for _ in range(3):
            u, v = rng.uniform(-1.5, 1.5, size=2)
            theta += rng.uniform(0.3, 0.9) * np.sin(2 * np.pi * (u * xx + v * yy) + rng.uniform(0, 2 * np.pi))
    elif np.ndim(field) == 0:
        theta = np.full((by, bx), float(field))
    else:
        field = np.asarray(field, dtype=np.float64)
        reps = (-(-by // field.shape[0]), -(-bx // field.shape[1]))
        theta = np.tile(field, reps)[:by, :bx]
    return theta, float(freq)


def render(params: SynthParams, finger: int, sample: int) -> GrayImage:
    theta, freq = finger_model(params, finger)
    pad = params.max_shift
    rng = _rng(params.seed, finger, sample)
    dy, dx = rng.integers(-pad, pad + 1, size=2) if pad else (0, 0)
    h, w = params.height + 2 * pad, params.width + 2 * pad
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    t = np.repeat(np.repeat(theta, BLOCK, axis=0), BLOCK, axis=1)[:h, :w]
    canvas = 127.5 + 127.5 * np.sin(2 * np.pi * freq * (xx * np.cos(t) + yy * np.sin(t)))
    r0, c0 = pad + dy, pad + dx
    img = canvas[r0:r0 + params.height, c0:c0 + params.width]
    if params.noise_sigma > 0:
        img = img + rng.normal(0.0, params.noise_sigma, size=img.shape)
    return GrayImage(np.clip(np.rint(img), 0, 255))


def generate(out_dir, fingers: int, samples: int, params: SynthParams = SynthParams(),
             first_finger: int = 1, naming: str = "{finger}_{sample}") -> list:
    """Write fingers x samples PGM files; returns their paths in (finger, sample) order."""
    if fingers < 1 or samples < 1:
        raise ValueError("fingers and samples must be >= 1")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoFailure(f"cannot create {out}: {e}") from e
    paths = []
    for f in range(first_finger, first_finger + fingers):
        for s in range(1, samples + 1):
            p = out / (naming.format(finger=f, sample=s) + ".pgm")
            try:
                write_pgm(render(params, f, s), p)
            except OSError as e:
                raise IoFailure(f"cannot write {p}: {e}") from e
            paths.append(p)
    return paths
