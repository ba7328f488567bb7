"""Image loading and FVC-style dataset scanning.

Only binary/ASCII PGM (maxval <= 255) is decoded here; PNG goes through
Pillow. Pixel values are stored as float64 from the start, in the file's
own scale (no rescaling when maxval < 255).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import (
    CorruptHeader,
    EmptyDataset,
    MalformedFilename,
    OverlapError,
    UnsupportedFormat,
)

IMAGE_SUFFIXES = (".pgm", ".pnm", ".png")
PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True, eq=False)
class GrayImage:
    """2-D grayscale raster, row-major, values in [0, 255]."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] <= 0 or arr.shape[1] <= 0:
            raise ValueError(f"image must be a non-empty 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0 or arr.max() > 255:
            raise ValueError("pixel values must be finite and within [0, 255]")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))


def _pgm_header(buf: bytes):
    """Parse magic, width, height, maxval. Returns them and the payload offset."""
    tokens = []
    pos = 0
    n = len(buf)
    while len(tokens) < 4:
        while pos < n and buf[pos:pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise CorruptHeader("PGM header ended early")
        if buf[pos:pos + 1] == b"#":
            while pos < n and buf[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not buf[pos:pos + 1].isspace() and buf[pos:pos + 1] != b"#":
            pos += 1
        tokens.append(buf[start:pos])
    magic = tokens[0]
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise CorruptHeader(f"non-integer PGM header field in {tokens[1:]!r}") from None
    if width <= 0 or height <= 0:
        raise CorruptHeader(f"bad PGM dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        if maxval > 255:
            raise UnsupportedFormat(f"16-bit PGM (maxval {maxval}) is not supported")
        raise CorruptHeader(f"bad PGM maxval {maxval}")
    # exactly one whitespace byte separates the header from a P5 raster
    return magic, width, height, maxval, pos + 1


def decode_pgm(buf: bytes) -> GrayImage:
    magic = buf[:2]
    if magic not in (b"P2", b"P5"):
        raise UnsupportedFormat(f"not a grayscale PGM (magic {magic!r})")
    _, width, height, maxval, offset = _pgm_header(buf)
    count = width * height
    if magic == b"P5":
        payload = buf[offset:offset + count]
        if len(payload) < count:
            raise CorruptHeader(f"P5 payload truncated: {len(payload)} of {count} bytes")
        values = np.frombuffer(payload, dtype=np.uint8)
    else:
        text = re.sub(rb"#[^\n\r]*", b" ", buf[offset - 1:])
        try:
            values = np.array(text.split(), dtype=np.int64)
        except ValueError:
            raise CorruptHeader("non-numeric sample in P2 payload") from None
        if values.size < count:
            raise CorruptHeader(f"P2 payload truncated: {values.size} of {count} samples")
        values = values[:count]
    if values.max(initial=0) > maxval:
        raise CorruptHeader(f"sample exceeds maxval {maxval}")
    return GrayImage(values.reshape(height, width).astype(np.float64))


def _load_png(path: Path) -> GrayImage:
    from PIL import Image

    with Image.open(path) as im:
        if im.mode in ("L", "LA"):
            arr = np.asarray(im.getchannel(0), dtype=np.float64)
        elif im.mode in ("RGB", "RGBA", "P", "PA"):
            rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
            arr = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
        elif im.mode == "1":
            arr = np.asarray(im.convert("L"), dtype=np.float64)
        else:
            raise UnsupportedFormat(f"PNG mode {im.mode!r} is not 8-bit grayscale or color")
    return GrayImage(np.clip(arr, 0.0, 255.0))


def load_image(path) -> GrayImage:
    """Load a PGM (P2/P5) or PNG file as a GrayImage.

    Raises FileNotFoundError, UnsupportedFormat or CorruptHeader.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image: {path}")
    buf = path.read_bytes()
    if buf.startswith(PNG_SIGNATURE):
        return _load_png(path)
    if buf[:2] in (b"P2", b"P5"):
        return decode_pgm(buf)
    raise UnsupportedFormat(f"{path}: unrecognized image format")


def encode_pgm(image: GrayImage) -> bytes:
    """Binary P5 encoding; values are rounded and clipped to 0..255."""
    pixels = np.clip(np.rint(image.data), 0, 255).astype(np.uint8)
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + pixels.tobytes()


def write_pgm(image: GrayImage, path) -> None:
    Path(path).write_bytes(encode_pgm(image))


class Sample(NamedTuple):
    finger_id: int
    sample_id: int
    path: Path


@dataclass
class DatasetSplit:
    enroll: list = field(default_factory=list)
    genuine_test: list = field(default_factory=list)
    impostor_test: list = field(default_factory=list)


def _filename_regex(naming: str) -> re.Pattern:
    if "{finger}" not in naming or "{sample}" not in naming:
        raise ValueError("naming pattern needs both {finger} and {sample}")
    parts = re.split(r"(\{finger\}|\{sample\})", naming)
    body = "".join(
        {"{finger}": r"(?P<finger>\d+)", "{sample}": r"(?P<sample>\d+)"}.get(p, re.escape(p))
        for p in parts
    )
    return re.compile(body + r"\.[A-Za-z0-9]+")


def _collect(root: Path, rx: re.Pattern) -> list:
    if not root.is_dir():
        raise FileNotFoundError(f"no such dataset directory: {root}")
    found, bad = [], []
    for p in sorted(root.iterdir()):
        if not p.is_file() or p.name.startswith(".") or p.suffix.lower() not in IMAGE_SUFFIXES:
            continue
        m = rx.fullmatch(p.name)
        if m is None or int(m["finger"]) <= 0 or int(m["sample"]) <= 0:
            bad.append(p)
            continue
        found.append(Sample(int(m["finger"]), int(m["sample"]), p))
    if bad:
        raise MalformedFilename(bad)
    return sorted(found, key=lambda s: (s.finger_id, s.sample_id, s.path.name))


def scan_dataset(root, impostor_root=None, naming: str = "{finger}_{sample}",
                 enroll_samples: int = 7, probe_sample: int = 8) -> DatasetSplit:
    """Split an FVC-style directory into enrollment, genuine and impostor sets.

    Samples 1..enroll_samples of each finger under ``root`` are enrolled and
    sample ``probe_sample`` is that finger's genuine probe; other sample ids
    are ignored. Every image under ``impostor_root`` becomes an impostor
    probe. Ordering is by (finger_id, sample_id).
    """
    rx = _filename_regex(naming)
    samples = _collect(Path(root), rx)
    split = DatasetSplit()
    for s in samples:
        if 1 <= s.sample_id <= enroll_samples:
            split.enroll.append(s)
        elif s.sample_id == probe_sample:
            split.genuine_test.append(s)
    if impostor_root is not None:
        split.impostor_test = _collect(Path(impostor_root), rx)
    if not split.enroll:
        raise EmptyDataset(f"no enrollable samples under {root}")

    enrolled = {s.finger_id for s in split.enroll}
    orphans = sorted({s.finger_id for s in split.genuine_test} - enrolled)
    if orphans:
        split.genuine_test = [s for s in split.genuine_test if s.finger_id in enrolled]
    overlap = sorted(enrolled & {s.finger_id for s in split.impostor_test})
    if overlap:
        raise OverlapError(f"impostor fingers also enrolled: {overlap}")
    return split
