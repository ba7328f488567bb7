import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fpdwt.dwt import (
    MODES, WAVELETS, SubbandSet, decompose3, dwt2_single, filter_pair, idwt2_single,
)
from fpdwt.errors import DimensionMismatch, EmptyInput, ImageTooSmall


@pytest.mark.parametrize("name", sorted(WAVELETS))
def test_filters_are_orthonormal(name):
    lo, hi = filter_pair(name)
    assert lo.sum() == pytest.approx(np.sqrt(2), abs=1e-14)
    assert hi.sum() == pytest.approx(0, abs=1e-14)
    for shift in range(0, lo.size, 2):
        expect = 1.0 if shift == 0 else 0.0
        assert lo[shift:] @ lo[:lo.size - shift] == pytest.approx(expect, abs=1e-14)
        assert lo[shift:] @ hi[:lo.size - shift] == pytest.approx(0, abs=1e-14)


@pytest.mark.parametrize("name", sorted(WAVELETS))
@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("shape", [(8, 8), (7, 12), (9, 5), (3, 2)])
def test_matches_loop_reference(name, mode, shape, rng):
    x = rng.normal(size=shape)
    got = dwt2_single(x, name, mode)
    ref = oracles.dwt2d(x.tolist(), WAVELETS[name].tolist(), mode)
    for plane, expect in zip((got.ll, got.lh, got.hl, got.hh), ref):
        np.testing.assert_allclose(plane, np.array(expect), rtol=0, atol=1e-12)


def test_constant_haar():
    b = dwt2_single(np.full((8, 8), 5.0), "db1")
    np.testing.assert_allclose(b.ll, 10.0, atol=1e-12)
    for plane in (b.lh, b.hl, b.hh):
        np.testing.assert_allclose(plane, 0.0, atol=1e-12)


@pytest.mark.parametrize("name", sorted(WAVELETS))
def test_single_pixel(name):
    b = dwt2_single(np.array([[3.0]]), name)
    assert b.shape == (1, 1)
    assert b.ll[0, 0] == pytest.approx(6.0)
    assert b.lh[0, 0] == pytest.approx(0, abs=1e-12)
    assert b.hh[0, 0] == pytest.approx(0, abs=1e-12)


def test_empty_input():
    with pytest.raises(EmptyInput):
        dwt2_single(np.zeros((0, 4)))


def test_subband_semantics():
    # intensity varying along x only shows up in HL (horizontal detail)
    x = np.tile(np.array([0.0, 9.0] * 8), (16, 1))
    b = dwt2_single(x, "db1")
    assert np.abs(b.hl).max() > 1
    np.testing.assert_allclose(b.lh, 0, atol=1e-12)
    b = dwt2_single(x.T, "db1")
    assert np.abs(b.lh).max() > 1
    np.testing.assert_allclose(b.hl, 0, atol=1e-12)


@pytest.mark.parametrize("name", sorted(WAVELETS))
@pytest.mark.parametrize("mode", MODES)
def test_round_trip(name, mode, rng):
    for shape in [(16, 16), (32, 32), (17, 9), (1, 5)]:
        x = rng.normal(size=shape)
        y = idwt2_single(dwt2_single(x, name, mode), name, (shape[1], shape[0]), mode)
        assert np.abs(x - y).max() < 1e-9


def test_zero_bands_invert_to_zero():
    z = np.zeros((4, 5))
    out = idwt2_single(SubbandSet(1, z, z, z, z), "db2", (10, 8))
    assert out.shape == (8, 10)
    assert not out.any()


def test_inconsistent_target():
    b = dwt2_single(np.ones((8, 8)))
    with pytest.raises(DimensionMismatch):
        idwt2_single(b, "db2", (11, 8))
    idwt2_single(b, "db2", (7, 7))  # off by one is a legitimate odd size


@settings(max_examples=40, deadline=None)
@given(h=st.integers(1, 20), w=st.integers(1, 20), seed=st.integers(0, 2**32 - 1))
def test_energy_preserved_periodic(h, w, seed):
    x = np.random.default_rng(seed).normal(size=(2 * h, 2 * w))
    b = dwt2_single(x, "db2", "periodic")
    energy = sum((p ** 2).sum() for _, p in b.bands())
    assert energy == pytest.approx((x ** 2).sum(), rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(h=st.integers(1, 40), w=st.integers(1, 40))
def test_shape_law(h, w):
    b = dwt2_single(np.zeros((h, w)))
    assert b.shape == ((h + 1) // 2, (w + 1) // 2)


def test_decompose3_sizes():
    p = decompose3(np.zeros((64, 64)))
    assert [lv.shape for lv in p.levels] == [(32, 32), (16, 16), (8, 8)]
    assert [lv.level for lv in p.levels] == [1, 2, 3]


def test_decompose3_db3_image_size():
    # 300 x 480 fingerprint: width 300, height 480
    p = decompose3(np.zeros((480, 300)))
    assert p.levels[0].shape == (240, 150)
    assert p.levels[2].shape == (60, 38)
    assert p.original_size == (300, 480)


def test_decompose3_chains_ll(rng):
    x = rng.normal(size=(40, 36))
    p = decompose3(x, "db2")
    np.testing.assert_array_equal(p.levels[1].ll, dwt2_single(p.levels[0].ll, "db2").ll)
    np.testing.assert_array_equal(p.levels[2].hh, dwt2_single(p.levels[1].ll, "db2").hh)


def test_decompose3_too_small():
    with pytest.raises(ImageTooSmall):
        decompose3(np.zeros((8, 8)))
