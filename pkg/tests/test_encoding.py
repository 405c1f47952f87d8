import numpy as np
import pytest
from hypothesis import given, strategies as st

from xshutter.encoding import (encode_latent, encode_relative, encode_rs, load_encoding,
                               save_encoding)
from xshutter.errors import ParameterError
from xshutter.timing import row_to_latent, scaled_timing


def test_rs_examples():
    assert encode_rs(3, 2).values.tolist() == [[0, 0], [1, 1], [2, 2]]
    assert encode_rs(800, 800).values[0].max() == 0
    assert encode_rs(37, 1).values.sum() == 37 * 36 / 2


def test_relative_examples():
    rel = encode_relative(9, 3, 9, 4).values
    assert rel[4, 0] == 0 and rel[0, 0] == -4
    assert encode_relative(800, 5, 9, 8).values[799, 0] == 0
    assert abs(encode_relative(800, 5, 9, 1).values[100, 0] - 0.125) <= 1e-12


@pytest.mark.parametrize("h", [9, 100, 800])
def test_closed_form(h):
    n = 9
    k = np.arange(h, dtype=np.float64)
    assert np.abs(encode_rs(h, 4).values - k[:, None]).max() <= 1e-9
    for t in range(n):
        rel = encode_relative(h, 4, n, t).values
        lat = encode_latent(h, 4, n, t).values
        assert np.abs(lat - (h - 1) / (n - 1) * t).max() <= 1e-9
        assert np.abs(rel - (k[:, None] - (h - 1) / (n - 1) * t)).max() <= 1e-9


@given(st.integers(2, 300), st.integers(2, 12), st.data())
def test_relative_properties(h, n, data):
    t = data.draw(st.integers(0, n - 1))
    rel = encode_relative(h, 3, n, t).values
    assert (rel == rel[:, :1]).all()
    if t + 1 < n:
        diff = rel - encode_relative(h, 3, n, t + 1).values
        np.testing.assert_allclose(diff, (h - 1) / (n - 1), rtol=0, atol=1e-9)
    zero = (h - 1) * t / (n - 1)
    if h >= n:
        # rows can only resolve every frame when there are at least as many rows
        assert row_to_latent(scaled_timing(h, 3, n), int(np.floor(zero + 0.5))) == t
    zeros = np.nonzero(rel[:, 0] == 0)[0]
    assert all(k == zero for k in zeros)
    if zero == int(zero):
        assert list(zeros) == [int(zero)]


def test_normalized_range():
    enc = encode_relative(100, 2, 9, 0)
    assert enc.normalized()[-1, 0] == 1.0 and enc.normalized().min() == 0.0
    assert encode_relative(100, 2, 9, 8).normalized()[0, 0] == -1.0


def test_bad_arguments():
    with pytest.raises(ParameterError):
        encode_rs(1, 4)
    with pytest.raises(ParameterError):
        encode_latent(8, 4, 9, 9)
    with pytest.raises(ParameterError):
        encode_relative(8, 4, 1, 0)


def test_dump_round_trip(tmp_path):
    enc = encode_relative(20, 6, 5, 2)
    save_encoding(tmp_path / "e.bin", enc)
    back = load_encoding(tmp_path / "e.bin")
    np.testing.assert_array_equal(back.values, enc.values.astype(np.float32))
