import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from fpdwt.errors import ConfigMismatch, LengthMismatch, UnknownFinger
from fpdwt.matcher import euclidean, identify, verify
from fpdwt.pipeline import ExtractionConfig, Template, TemplateStore

HASH = ExtractionConfig().config_hash


def make_store(rng, fingers=(1, 2, 3), samples=7, dim=96):
    store = TemplateStore(ExtractionConfig())
    for f in fingers:
        centre = rng.normal(size=dim) * 10
        for s in range(1, samples + 1):
            store.add(Template(f, s, centre + rng.normal(size=dim), HASH))
    return store


def test_euclidean_basics(rng):
    assert euclidean([0, 0], [3, 4]) == 5
    a = rng.normal(size=96)
    assert euclidean(a, a) == 0
    b = rng.normal(size=96)
    assert euclidean(a, b) == pytest.approx(oracles.euclidean(a.tolist(), b.tolist()), abs=1e-12)
    with pytest.raises(LengthMismatch):
        euclidean([1, 2], [1, 2, 3])


vec = arrays(np.float64, 96, elements=st.floats(-1e3, 1e3))


@settings(max_examples=50, deadline=None)
@given(vec, vec, vec)
def test_metric_axioms(a, b, c):
    assert euclidean(a, b) >= 0
    assert euclidean(a, b) == euclidean(b, a)
    assert (euclidean(a, b) == 0) == bool(np.array_equal(a, b))
    assert euclidean(a, c) <= euclidean(a, b) + euclidean(b, c) + 1e-9


def test_verify_identical_probe(rng):
    store = make_store(rng)
    enrolled = store.templates[2][4]
    probe = Template(0, 0, enrolled.features.copy(), HASH)
    d = verify(probe, 2, store, 1.0)
    assert d.matched and d.distance == 0 and d.best_sample_id == 5


def test_verify_threshold_rule(rng):
    store = make_store(rng)
    probe = Template(0, 0, rng.normal(size=96), HASH)
    d = verify(probe, 1, store, 1e9)
    assert d.matched
    assert not verify(probe, 1, store, d.distance * 0.999).matched
    assert verify(probe, 1, store, d.distance).matched  # equality accepts


def test_verify_is_min_over_samples(rng):
    store = make_store(rng)
    probe = Template(0, 0, rng.normal(size=96), HASH)
    expect = min(oracles.euclidean(probe.features, t.features) for t in store.templates[3])
    assert verify(probe, 3, store, 0).distance == pytest.approx(expect, abs=1e-12)


def test_verify_permutation_invariant(rng):
    store = make_store(rng)
    probe = Template(0, 0, rng.normal(size=96), HASH)
    before = verify(probe, 1, store, 0)
    shuffled = TemplateStore(store.config)
    for t in reversed(store.all_templates()):
        shuffled.add(t)
    assert verify(probe, 1, shuffled, 0) == before


def test_aggregations(rng):
    store = make_store(rng)
    probe = Template(0, 0, rng.normal(size=96), HASH)
    dists = [euclidean(probe.features, t.features) for t in store.templates[1]]
    assert verify(probe, 1, store, 0, "mean").distance == pytest.approx(np.mean(dists))
    assert verify(probe, 1, store, 0, "median").distance == pytest.approx(np.median(dists))


def test_verify_errors(rng):
    store = make_store(rng)
    with pytest.raises(UnknownFinger):
        verify(Template(0, 0, np.zeros(96), HASH), 9999, store, 1)
    with pytest.raises(ConfigMismatch):
        verify(Template(0, 0, np.zeros(96), "other"), 1, store, 1)


def test_identify_ranking(rng):
    store = make_store(rng)
    probe = Template(0, 0, store.templates[3][0].features.copy(), HASH)
    ranked = identify(probe, store, 0.0)
    assert ranked[0].finger_id == 3 and ranked[0].distance == 0 and ranked[0].within_threshold
    brute = sorted(store.finger_ids, key=lambda f: min(
        oracles.euclidean(probe.features, t.features) for t in store.templates[f]))
    assert [c.finger_id for c in ranked] == brute


def test_identify_no_flags(rng):
    store = make_store(rng)
    ranked = identify(Template(0, 0, rng.normal(size=96), HASH), store, 0.0)
    assert len(ranked) == 3 and not any(c.within_threshold for c in ranked)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 200), st.floats(0, 200), st.integers(0, 2**32 - 1))
def test_decision_monotone(t1, t2, seed):
    rng = np.random.default_rng(seed)
    store = make_store(rng, fingers=(1,), samples=3, dim=4)
    probe = Template(0, 0, rng.normal(size=4) * 20, HASH)
    lo, hi = sorted((t1, t2))
    if verify(probe, 1, store, lo).matched:
        assert verify(probe, 1, store, hi).matched
