import numpy as np
import pytest
from hypothesis import given, strategies as st

from xshutter.errors import ParameterError, ShapeError
from xshutter.formation import (LatentSequence, ObservationPair, degrade_lowlight, degrade_shift,
                                delinearize, linearize, shift_image, synthesize_blur, synthesize_rs)
from xshutter.io import quantize, read_png, write_png
from xshutter.timing import row_to_latent, scaled_timing

from conftest import random_sequence


def static_sequence(frame, n=9):
    h, w = frame.shape[:2]
    return LatentSequence(np.repeat(frame[None], n, axis=0), scaled_timing(h, w, n))


def bar_sequence(velocity, h=16, w=40, n=9, x0=12):
    frames = np.zeros((n, h, w, 1))
    for t in range(n):
        frames[t, :, x0 + velocity * t] = 1.0
    return LatentSequence(frames, scaled_timing(h, w, n))


def test_linearize_examples():
    assert np.array_equal(linearize(np.zeros((2, 2)), 2.2), np.zeros((2, 2)))
    assert np.array_equal(linearize(np.ones((2, 2)), 2.2), np.ones((2, 2)))
    np.testing.assert_allclose(linearize(np.full((2, 2), 0.5), 2.0), 0.25)
    np.testing.assert_allclose(delinearize(linearize(np.full((2, 2), 0.3), 2.2), 2.2), 0.3)
    with pytest.raises(ParameterError):
        linearize(np.ones(2), 0.0)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([1, 3]))
def test_static_sequence_bit_exact(seed, c):
    frame = quantize(np.random.default_rng(seed).random((12, 10, c)), 16) / 65535.0
    seq = static_sequence(frame)
    assert np.array_equal(synthesize_blur(seq), frame)
    assert np.array_equal(synthesize_rs(seq), frame)


def test_static_png_round_trip(tmp_path, rng):
    frame = quantize(rng.random((20, 24, 3)), 8)
    write_png(tmp_path / "f.png", frame / 255.0, 8)
    loaded = read_png(tmp_path / "f.png")
    seq = static_sequence(loaded)
    for img in (synthesize_blur(seq), synthesize_rs(seq)):
        write_png(tmp_path / "o.png", img, 8)
        assert np.array_equal(quantize(read_png(tmp_path / "o.png"), 8), frame)


@given(st.floats(0.0, 1.0))
def test_blur_commutes_with_scaling(alpha):
    seq = random_sequence(np.random.default_rng(5))
    scaled = LatentSequence(alpha * seq.frames, seq.timing)
    np.testing.assert_allclose(synthesize_blur(scaled), alpha * synthesize_blur(seq), atol=1e-15)


def test_blur_of_translating_bar():
    blur = synthesize_blur(bar_sequence(2))[0, :, 0]
    expected = np.zeros(40)
    expected[12:29:2] = 1.0 / 9.0
    np.testing.assert_allclose(blur, expected, atol=1e-15)
    occupied = np.nonzero(blur)[0]
    assert occupied[-1] - occupied[0] + 1 == 17


def test_rs_rows_copy_owner_exhaustive(rng):
    for h, n in ((16, 5), (9, 9), (31, 4)):
        seq = random_sequence(rng, h=h, n=n)
        rs = synthesize_rs(seq)
        for k in range(h):
            assert np.array_equal(rs[k], seq.frames[row_to_latent(seq.timing, k), k])


def test_rs_shear_of_translating_bar():
    for v in (1, -1, 2):
        seq = bar_sequence(v)
        rs = synthesize_rs(seq)[..., 0]
        for k in range(seq.timing.image_height):
            t = row_to_latent(seq.timing, k)
            assert np.argmax(rs[k]) - 12 == v * t
    top, bottom = (np.argmax(synthesize_rs(bar_sequence(v))[[0, -1], :, 0], axis=1) for v in (1, -1))
    assert bottom[1] - bottom[0] == -(top[1] - top[0])


def test_two_row_rs():
    seq = LatentSequence(np.stack([np.zeros((2, 3)), np.ones((2, 3))]), scaled_timing(2, 3, 2))
    rs = synthesize_rs(seq)[..., 0]
    assert np.array_equal(rs, [[0, 0, 0], [1, 1, 1]])


def test_shape_checks():
    with pytest.raises(ShapeError):
        LatentSequence(np.zeros((4, 8, 8, 1)), scaled_timing(8, 8, 5))
    with pytest.raises(ShapeError):
        LatentSequence(np.zeros((5, 8, 8, 2)), scaled_timing(8, 8, 5))
    with pytest.raises(ShapeError):
        ObservationPair(np.zeros((8, 8)), np.zeros((8, 9)), scaled_timing(8, 8, 5))


def test_degrade_shift(rng):
    r = rng.random((20, 20, 1))
    same, off = degrade_shift(r, 0, 3)
    assert off == (0, 0) and np.array_equal(same, r)
    a, off_a = degrade_shift(r, 4, 7)
    b, off_b = degrade_shift(r, 4, 7)
    assert off_a == off_b and np.array_equal(a, b)
    assert max(map(abs, off_a)) <= 4
    dx, dy = off_a
    # content moved by (dx, dy)
    assert np.array_equal(a[8 + dy, 8 + dx], r[8, 8])


def test_shift_image_oracle(rng):
    img = rng.random((7, 9))
    out = shift_image(img, 2, -1)
    for y in range(7):
        for x in range(9):
            assert out[y, x] == img[min(max(y + 1, 0), 6), min(max(x - 2, 0), 8)]


def test_degrade_lowlight_limits(rng):
    r = rng.random((16, 16, 3))
    assert np.abs(degrade_lowlight(r, 1e9, (1.0, 1.0), seed=1) - r).max() < 1e-3
    assert not degrade_lowlight(np.zeros((8, 8)), 300, seed=2).any()
    a = degrade_lowlight(r, 500, seed=9)
    assert np.array_equal(a, degrade_lowlight(r, 500, seed=9))
    with pytest.raises(ParameterError):
        degrade_lowlight(r, 0)


def test_degrade_lowlight_is_unbiased():
    peak = 500
    means = np.array([degrade_lowlight(np.full((1, 1), 0.5), peak, (1.0, 1.0), seed=s)[0, 0]
                      for s in range(10_000)])
    stderr = np.sqrt(0.5 / peak) / np.sqrt(len(means))
    assert abs(means.mean() - 0.5) < 3 * stderr
