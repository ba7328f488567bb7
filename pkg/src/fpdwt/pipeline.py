"""Image -> 96-dim feature vector, templates and template stores.

Feature layout per DWT level (levels 1, 2, 3 in turn, 32 values each):

    [0, 8)    directional: coherence texture, orientation texture
    [8, 24)   center area: LL, LH, HL, HH window textures
    [24, 32)  edges: LL, LH, HL, HH (density, mean magnitude)

Every texture group is [correlation, contrast, homogeneity, energy].
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import ingest
from .centerarea import center_features
from .dwt import MODES, WAVELETS, decompose3
from .edgefeat import CannyConfig, edge_features
from .errors import ConfigHashMissing, ConfigMismatch, EmptyDataset, IoFailure, SchemaMismatch
from .orientation import directional_features
from .texture import GlcmConfig

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
N_LEVELS = 3
DIRECTIONAL_LEN = 8
CENTER_LEN = 16
EDGE_LEN = 8
LEVEL_LEN = DIRECTIONAL_LEN + CENTER_LEN + EDGE_LEN
FEATURE_LEN = N_LEVELS * LEVEL_LEN


def feature_slices(level: int) -> dict:
    """Index ranges of each feature group for DWT level 1, 2 or 3."""
    base = (level - 1) * LEVEL_LEN
    return {
        "directional": slice(base, base + DIRECTIONAL_LEN),
        "center": slice(base + DIRECTIONAL_LEN, base + DIRECTIONAL_LEN + CENTER_LEN),
        "edge": slice(base + DIRECTIONAL_LEN + CENTER_LEN, base + LEVEL_LEN),
    }


@dataclass(frozen=True)
class ExtractionConfig:
    wavelet: str = "db2"
    boundary: str = "symmetric"
    glcm: GlcmConfig = field(default_factory=GlcmConfig)
    canny: CannyConfig = field(default_factory=CannyConfig)
    swap_axes: bool = False
    normalize: bool = False
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.wavelet not in WAVELETS:
            raise ValueError(f"unknown wavelet {self.wavelet!r}")
        if self.boundary not in MODES:
            raise ValueError(f"unknown boundary mode {self.boundary!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["glcm"]["offset"] = list(d["glcm"]["offset"])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExtractionConfig":
        d = dict(d)
        glcm = GlcmConfig(**d.pop("glcm", {}))
        canny = CannyConfig(**d.pop("canny", {}))
        return cls(glcm=glcm, canny=canny, **d)

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def updated(self, flat: dict) -> "ExtractionConfig":
        """Apply dotted overrides such as {"canny.sigma": 1.5}."""
        d = self.to_dict()
        for key, value in flat.items():
            head, _, tail = key.partition(".")
            if tail:
                if head not in ("glcm", "canny") or tail not in d[head]:
                    raise KeyError(f"unknown config key {key!r}")
                d[head][tail] = value
            elif head in d and head not in ("glcm", "canny"):
                d[head] = value
            else:
                raise KeyError(f"unknown config key {key!r}")
        return ExtractionConfig.from_dict(d)


@dataclass(eq=False)
class Template:
    finger_id: int
    sample_id: int
    features: np.ndarray
    config_hash: str
    source_path: Optional[str] = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)

    def __eq__(self, other):
        if not isinstance(other, Template):
            return NotImplemented
        return (self.finger_id == other.finger_id and self.sample_id == other.sample_id
                and self.config_hash == other.config_hash
                and self.source_path == other.source_path
                and self.features.shape == other.features.shape
                and bool(np.all(self.features.view(np.uint64) == other.features.view(np.uint64))))


def extract(image, cfg: ExtractionConfig = ExtractionConfig()) -> np.ndarray:
    """Concatenated directional, center-area and edge features of all three levels."""
    pyramid = decompose3(image, cfg.wavelet, cfg.boundary)
    out = []
    for bands in pyramid.levels:
        out += directional_features(bands, cfg.glcm, cfg.swap_axes)
        out += center_features(bands, cfg.glcm)
        out += edge_features(bands, cfg.canny)
    vec = np.array(out, dtype=np.float64)
    if not np.all(np.isfinite(vec)):
        raise FloatingPointError("non-finite feature value")
    return vec


def make_template(image, finger_id: int, sample_id: int,
                  cfg: ExtractionConfig = ExtractionConfig(), source_path=None) -> Template:
    src = None if source_path is None else str(source_path)
    return Template(finger_id, sample_id, extract(image, cfg), cfg.config_hash, src)


# -- template files ---------------------------------------------------------

def template_to_dict(t: Template) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "finger_id": int(t.finger_id),
        "sample_id": int(t.sample_id),
        "config_hash": t.config_hash,
        "source_path": t.source_path,
        # repr() of a float round-trips exactly
        "features": [float(v) for v in t.features],
    }


def template_from_dict(d: dict) -> Template:
    if d.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(f"unsupported template schema_version {d.get('schema_version')!r}")
    if not d.get("config_hash"):
        raise ConfigHashMissing("template has no config_hash")
    feats = np.array(d["features"], dtype=np.float64)
    if not np.all(np.isfinite(feats)):
        raise IoFailure("template contains non-finite features")
    return Template(int(d["finger_id"]), int(d["sample_id"]), feats, d["config_hash"],
                    d.get("source_path"))


def save_template(t: Template, path) -> None:
    if not np.all(np.isfinite(t.features)):
        raise ValueError("refusing to persist non-finite features")
    try:
        Path(path).write_text(json.dumps(template_to_dict(t), allow_nan=False) + "\n")
    except OSError as e:
        raise IoFailure(f"cannot write template {path}: {e}") from e


def _read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise IoFailure(f"{path}: malformed JSON at line {e.lineno} column {e.colno} "
                        f"(char {e.pos})") from e


def load_template(path) -> Template:
    return template_from_dict(_read_json(path))


# -- template store ---------------------------------------------------------

@dataclass
class TemplateStore:
    """Enrolled templates grouped by finger, all sharing one config."""

    config: ExtractionConfig
    templates: dict = field(default_factory=dict)  # finger_id -> [Template]
    failures: list = field(default_factory=list)  # (path, message)

    @property
    def config_hash(self) -> str:
        return self.config.config_hash

    def add(self, t: Template) -> None:
        if t.config_hash != self.config_hash:
            raise ConfigMismatch(f"template hash {t.config_hash} != store hash {self.config_hash}")
        group = self.templates.setdefault(t.finger_id, [])
        group.append(t)
        group.sort(key=lambda x: x.sample_id)

    @property
    def finger_ids(self) -> list:
        return sorted(self.templates)

    def __len__(self):
        return sum(len(g) for g in self.templates.values())

    def all_templates(self) -> list:
        return [t for f in self.finger_ids for t in self.templates[f]]

    def zscore(self):
        """Per-dimension (mean, std) of the enrolled vectors; std 0 becomes 1."""
        m = np.array([t.features for t in self.all_templates()])
        mean = m.mean(axis=0)
        std = m.std(axis=0)
        std[std == 0] = 1.0
        return mean, std

    def transform(self, vec) -> np.ndarray:
        """Map a feature vector into the space distances are measured in."""
        vec = np.asarray(vec, dtype=np.float64)
        if not self.config.normalize:
            return vec
        mean, std = self._stats()
        return (vec - mean) / std

    def _stats(self):
        cached = getattr(self, "_zcache", None)
        if cached is None or cached[0] != len(self):
            cached = (len(self), self.zscore())
            self._zcache = cached
        return cached[1]

    def save(self, directory) -> None:
        d = Path(directory)
        try:
            d.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise IoFailure(f"cannot create store directory {d}: {e}") from e
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "config_hash": self.config_hash,
            "fingers": {},
            "failures": [[str(p), m] for p, m in self.failures],
        }
        for f in self.finger_ids:
            names = []
            for t in self.templates[f]:
                name = f"{f}_{t.sample_id}.json"
                save_template(t, d / name)
                names.append(name)
            manifest["fingers"][str(f)] = names
        (d / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")

    @classmethod
    def load(cls, directory) -> "TemplateStore":
        d = Path(directory)
        manifest = _read_json(d / "manifest.json")
        if manifest.get("schema_version") != SCHEMA_VERSION:
            raise SchemaMismatch(f"unsupported store schema_version {manifest.get('schema_version')!r}")
        if not manifest.get("config_hash"):
            raise ConfigHashMissing("store manifest has no config_hash")
        cfg = ExtractionConfig.from_dict(manifest["config"])
        if cfg.config_hash != manifest["config_hash"]:
            raise SchemaMismatch("manifest config does not match its config_hash")
        store = cls(cfg, failures=[tuple(x) for x in manifest.get("failures", [])])
        for names in manifest["fingers"].values():
            for name in names:
                store.add(load_template(d / name))
        return store


def enroll_database(split, cfg: ExtractionConfig = ExtractionConfig(),
                    progress: Optional[Callable[[int, int, object], None]] = None,
                    workers: int = 1) -> TemplateStore:
    """Build a TemplateStore from the split's enrollment samples.

    A sample that fails to load or extract is logged into ``store.failures``
    and skipped. ``progress(done, total, sample)`` is called after each one.
    """
    samples = list(split.enroll) if hasattr(split, "enroll") else list(split)
    if not samples:
        raise EmptyDataset("nothing to enroll")
    store = TemplateStore(cfg)

    def work(s):
        try:
            return make_template(ingest.load_image(s.path), s.finger_id, s.sample_id, cfg, s.path)
        except Exception as e:  # noqa: BLE001 - any per-image failure is recorded
            return e

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(work, samples))
    else:
        results = map(work, samples)

    for i, (s, res) in enumerate(zip(samples, results), 1):
        if isinstance(res, Exception):
            log.warning("skipping %s: %s", s.path, res)
            store.failures.append((str(s.path), f"{type(res).__name__}: {res}"))
        else:
            store.add(res)
        if progress is not None:
            progress(i, len(samples), s)
    return store

