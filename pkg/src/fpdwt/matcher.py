"""Euclidean template matching: verification (1:1) and identification (1:N).

A probe is accepted when its distance is <= the threshold.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ConfigMismatch, LengthMismatch, UnknownFinger

AGGREGATIONS = ("min", "mean", "median")


class MatchDecision(NamedTuple):
    distance: float
    matched: bool
    threshold: float
    best_sample_id: int


class Candidate(NamedTuple):
    finger_id: int
    distance: float
    within_threshold: bool


def euclidean(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"feature lengths differ: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def _check_config(probe, store):
    if probe.config_hash != store.config_hash:
        raise ConfigMismatch(
            f"probe extracted with config {probe.config_hash}, store uses {store.config_hash}")


def finger_distance(probe, templates, store, aggregation: str = "min"):
    """(aggregated distance, sample_id of the nearest template)."""
    if aggregation not in AGGREGATIONS:
        raise ValueError(f"aggregation must be one of {AGGREGATIONS}")
    p = store.transform(probe.features)
    dists = np.array([euclidean(p, store.transform(t.features)) for t in templates])
    # templates are kept sorted by sample_id, so argmin breaks ties on the lowest id
    best = int(np.argmin(dists))
    agg = {"min": np.min, "mean": np.mean, "median": np.median}[aggregation](dists)
    return float(agg), templates[best].sample_id


def verify(probe, claimed_finger: int, store, threshold: float,
           aggregation: str = "min") -> MatchDecision:
    _check_config(probe, store)
    templates = store.templates.get(claimed_finger)
    if not templates:
        raise UnknownFinger(f"finger {claimed_finger} is not enrolled")
    dist, best = finger_distance(probe, templates, store, aggregation)
    return MatchDecision(dist, dist <= threshold, float(threshold), best)


def identify(probe, store, threshold: float, aggregation: str = "min") -> list:
    """Every enrolled finger ranked by distance (ascending, ties by finger id)."""
    _check_config(probe, store)
    if len(store) == 0:
        raise ValueError("cannot identify against an empty store")
    ranked = []
    for f in store.finger_ids:
        dist, _ = finger_distance(probe, store.templates[f], store, aggregation)
        ranked.append(Candidate(f, dist, dist <= threshold))
    ranked.sort(key=lambda c: (c.distance, c.finger_id))
    return ranked
