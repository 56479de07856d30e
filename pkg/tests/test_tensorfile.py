import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from eval3d.backends.tensorfile import read_tensor, write_tensor
from eval3d.errors import TensorFileError


def test_header_layout_2x3_f32(tmp_path):
    path = tmp_path / "t.etns"
    write_tensor(np.zeros((2, 3), np.float32), path)
    raw = path.read_bytes()
    # 4 magic + 4 version + 1 dtype + 4 ndim + 16 dims + 24 payload = 53
    assert len(raw) == 53
    assert raw[:4] == b"ETNS"
    back = read_tensor(path)
    assert back.shape == (2, 3)
    assert back.dtype == np.float32


def test_payload_size_512(tmp_path):
    path = tmp_path / "d.etns"
    write_tensor(np.ones((512, 512), np.float32), path)
    header = 4 + 4 + 1 + 4 + 2 * 8
    assert path.stat().st_size - header == 512 * 512 * 4


def test_round_trip_bit_identical(tmp_path, rng):
    path = tmp_path / "r.etns"
    data = rng.random((7, 5, 3)).astype(np.float32)
    write_tensor(data, path)
    first = path.read_bytes()
    back = read_tensor(path)
    assert back.tobytes() == data.tobytes()
    write_tensor(back, path)
    assert path.read_bytes() == first


def test_uint8_round_trip(tmp_path, rng):
    path = tmp_path / "u.etns"
    data = rng.integers(0, 256, size=(4, 9), dtype=np.uint8)
    write_tensor(data, path)
    back = read_tensor(path)
    assert back.dtype == np.uint8
    np.testing.assert_array_equal(back, data)


def _corrupt(tmp_path, mutate):
    path = tmp_path / "x.etns"
    write_tensor(np.zeros((2, 2), np.float32), path)
    raw = bytearray(path.read_bytes())
    mutate(raw)
    path.write_bytes(bytes(raw))
    return path


def test_bad_magic(tmp_path):
    path = _corrupt(tmp_path, lambda raw: raw.__setitem__(0, ord(b"X")))
    with pytest.raises(TensorFileError) as err:
        read_tensor(path)
    assert err.value.code == "bad magic"


def test_bad_version(tmp_path):
    path = _corrupt(tmp_path, lambda raw: raw.__setitem__(4, 99))
    with pytest.raises(TensorFileError) as err:
        read_tensor(path)
    assert err.value.code == "bad version"


def test_bad_dtype(tmp_path):
    path = _corrupt(tmp_path, lambda raw: raw.__setitem__(8, 9))
    with pytest.raises(TensorFileError) as err:
        read_tensor(path)
    assert err.value.code == "bad dtype"


def test_short_payload(tmp_path):
    path = tmp_path / "s.etns"
    write_tensor(np.zeros((2, 2), np.float32), path)
    path.write_bytes(path.read_bytes()[:-3])
    with pytest.raises(TensorFileError) as err:
        read_tensor(path)
    assert err.value.code == "short payload"


def test_zero_dims_rejected(tmp_path):
    with pytest.raises(TensorFileError):
        write_tensor(np.zeros((0, 3), np.float32), tmp_path / "z.etns")


@settings(max_examples=30, deadline=None)
@given(
    data=hnp.arrays(
        dtype=np.float32,
        shape=hnp.array_shapes(min_dims=1, max_dims=4, min_side=1, max_side=8),
        elements=st.floats(width=32, allow_nan=False, allow_infinity=False),
    )
)
def test_round_trip_property(data):
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as td:
        path = Path(td) / "prop.etns"
        write_tensor(data, path)
        back = read_tensor(path)
    assert back.shape == data.shape
    assert back.tobytes() == np.ascontiguousarray(data).tobytes()
