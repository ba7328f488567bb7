import numpy as np
import pytest

from fpdwt.ingest import load_image
from fpdwt.synth import SynthParams, finger_model, generate, render


def test_noise_free_is_deterministic():
    p = SynthParams(width=64, height=48, noise_sigma=0, seed=9)
    a, b = render(p, 1, 1), render(p, 1, 1)
    assert a == b
    assert a.data.shape == (48, 64)
    assert a.data.min() >= 0 and a.data.max() <= 255


def test_global_orientation_is_a_pure_sinusoid():
    p = SynthParams(width=32, height=32, noise_sigma=0, max_shift=0, orientation_field=0.0,
                    ridge_frequency=0.125)
    img = render(p, 1, 1).data
    expect = np.rint(127.5 + 127.5 * np.sin(2 * np.pi * 0.125 * np.arange(32)))
    np.testing.assert_array_equal(img[0], np.clip(expect, 0, 255))
    np.testing.assert_array_equal(img, np.tile(img[0], (32, 1)))


def test_samples_differ_fingers_differ():
    p = SynthParams(width=64, height=64)
    assert render(p, 1, 1) != render(p, 1, 2)
    t1, f1 = finger_model(p, 1)
    t2, f2 = finger_model(p, 2)
    assert f1 != f2 or not np.array_equal(t1, t2)


def test_bad_params():
    with pytest.raises(ValueError):
        SynthParams(ridge_frequency=0.6)
    with pytest.raises(ValueError):
        SynthParams(width=8)


def test_generate_files(tmp_path):
    paths = generate(tmp_path, 10, 8, SynthParams(width=32, height=32))
    assert len(paths) == 80
    assert paths[0].name == "1_1.pgm" and paths[-1].name == "10_8.pgm"
    assert load_image(paths[5]).width == 32


def test_generate_is_reproducible(tmp_path):
    p = SynthParams(width=32, height=32, seed=5)
    a = generate(tmp_path / "a", 2, 2, p)
    b = generate(tmp_path / "b", 2, 2, p)
    assert [x.read_bytes() for x in a] == [x.read_bytes() for x in b]
