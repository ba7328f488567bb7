import json
import math

import numpy as np
import pytest

from fpdwt.errors import (
    ConfigHashMissing, ConfigMismatch, EmptyDataset, IoFailure, SchemaMismatch,
)
from fpdwt.ingest import DatasetSplit, GrayImage, scan_dataset
from fpdwt.pipeline import (
    FEATURE_LEN, ExtractionConfig, Template, TemplateStore, enroll_database, extract,
    feature_slices, load_template, make_template, save_template,
)
from fpdwt.synth import SynthParams, generate, render
from fpdwt.texture import GlcmConfig

SMALL = SynthParams(width=96, height=96)


def test_feature_layout():
    assert FEATURE_LEN == 96
    assert feature_slices(1) == {"directional": slice(0, 8), "center": slice(8, 24),
                                 "edge": slice(24, 32)}
    assert feature_slices(2)["directional"] == slice(32, 40)
    assert feature_slices(3)["edge"] == slice(88, 96)


def test_extract_shape_and_determinism():
    img = render(SMALL, 1, 1)
    a = extract(img)
    b = extract(img)
    assert a.shape == (96,) and np.isfinite(a).all()
    assert a.tobytes() == b.tobytes()


def test_extract_groups_match_submodules():
    from fpdwt.centerarea import center_features
    from fpdwt.dwt import decompose3
    from fpdwt.edgefeat import edge_features
    from fpdwt.orientation import directional_features
    img = render(SMALL, 2, 3)
    vec = extract(img)
    pyr = decompose3(img)
    for level, bands in enumerate(pyr.levels, 1):
        s = feature_slices(level)
        assert vec[s["directional"]].tolist() == directional_features(bands)
        assert vec[s["center"]].tolist() == center_features(bands)
        assert vec[s["edge"]].tolist() == edge_features(bands)


def test_constant_image_vector():
    vec = extract(GrayImage(np.full((64, 64), 100.0)))
    for level in (1, 2, 3):
        s = feature_slices(level)
        assert vec[s["directional"]].tolist() == [0.0, 0.0, 1.0, 1.0] * 2
        assert vec[s["center"]].tolist() == [0.0, 0.0, 1.0, 1.0] * 4
        assert vec[s["edge"]].tolist() == [0.0] * 8


def test_config_hash_stability():
    a = ExtractionConfig()
    assert a.config_hash == ExtractionConfig().config_hash
    assert a.config_hash != ExtractionConfig(wavelet="db4").config_hash
    assert a.config_hash != ExtractionConfig(normalize=True).config_hash
    assert a.config_hash != ExtractionConfig(glcm=GlcmConfig(levels=16)).config_hash
    assert ExtractionConfig.from_dict(a.to_dict()) == a
    assert a.updated({"canny.sigma": 2.0}).canny.sigma == 2.0
    with pytest.raises(KeyError):
        a.updated({"canny.nope": 1})


def test_template_round_trip(tmp_path, rng):
    t = Template(4, 2, rng.normal(size=96) * 1e3, "abc123", "x/4_2.pgm")
    save_template(t, tmp_path / "t.json")
    assert load_template(tmp_path / "t.json") == t


def test_schema_mismatch(tmp_path):
    t = Template(1, 1, np.zeros(96), "h")
    save_template(t, tmp_path / "t.json")
    doc = json.loads((tmp_path / "t.json").read_text())
    doc["schema_version"] = 999
    (tmp_path / "t.json").write_text(json.dumps(doc))
    with pytest.raises(SchemaMismatch):
        load_template(tmp_path / "t.json")
    doc["schema_version"] = 1
    doc["config_hash"] = ""
    (tmp_path / "t.json").write_text(json.dumps(doc))
    with pytest.raises(ConfigHashMissing):
        load_template(tmp_path / "t.json")


def test_truncated_file(tmp_path):
    save_template(Template(1, 1, np.ones(96), "h"), tmp_path / "t.json")
    text = (tmp_path / "t.json").read_text()
    (tmp_path / "t.json").write_text(text[:len(text) // 2])
    with pytest.raises(IoFailure, match="line 1 column"):
        load_template(tmp_path / "t.json")


def test_refuses_non_finite(tmp_path):
    with pytest.raises(ValueError):
        save_template(Template(1, 1, [math.nan] * 96, "h"), tmp_path / "t.json")


@pytest.fixture
def corpus(tmp_path):
    generate(tmp_path / "db", 3, 8, SMALL)
    return tmp_path / "db"


def test_enroll_groups(corpus):
    split = scan_dataset(corpus)
    calls = []
    store = enroll_database(split, progress=lambda i, n, s: calls.append((i, n)))
    assert len(store) == 21
    assert [len(store.templates[f]) for f in store.finger_ids] == [7, 7, 7]
    assert calls[-1] == (21, 21)
    assert store.failures == []


def test_enroll_records_failures(corpus):
    (corpus / "2_3.pgm").write_bytes(b"P5\n96 96\n255\n\x00\x01")
    store = enroll_database(scan_dataset(corpus))
    assert len(store) == 20
    assert len(store.failures) == 1 and "2_3.pgm" in store.failures[0][0]


def test_enroll_empty():
    with pytest.raises(EmptyDataset):
        enroll_database(DatasetSplit())


def test_threaded_enrollment_is_identical(corpus):
    split = scan_dataset(corpus)
    a = enroll_database(split)
    b = enroll_database(split, workers=4)
    assert a.all_templates() == b.all_templates()


def test_store_round_trip(corpus, tmp_path):
    store = enroll_database(scan_dataset(corpus), ExtractionConfig(wavelet="db1"))
    store.save(tmp_path / "store")
    again = TemplateStore.load(tmp_path / "store")
    assert again.config == store.config
    assert again.all_templates() == store.all_templates()


def test_store_rejects_foreign_template():
    store = TemplateStore(ExtractionConfig())
    with pytest.raises(ConfigMismatch):
        store.add(Template(1, 1, np.zeros(96), "not-the-hash"))


def test_zscore_transform(corpus):
    store = enroll_database(scan_dataset(corpus), ExtractionConfig(normalize=True))
    z = np.array([store.transform(t.features) for t in store.all_templates()])
    np.testing.assert_allclose(z.mean(axis=0), 0, atol=1e-9)
    plain = enroll_database(scan_dataset(corpus))
    v = plain.all_templates()[0].features
    assert plain.transform(v) is not None and np.array_equal(plain.transform(v), v)


def test_make_template_metadata():
    t = make_template(render(SMALL, 5, 1), 5, 1, source_path="a/5_1.pgm")
    assert (t.finger_id, t.sample_id, t.source_path) == (5, 1, "a/5_1.pgm")
    assert t.config_hash == ExtractionConfig().config_hash
