import numpy as np
import pytest
from fractions import Fraction

from llve.frames import Frame
from llve.imageio import load_frame, load_sequence, quantize_8bit, resample, save_frame


def test_load_png_maps_to_unit_range(tmp_path):
    from PIL import Image

    path = tmp_path / "px.png"
    Image.fromarray(np.array([[[255, 0, 128]]], dtype=np.uint8), mode="RGB").save(path)
    f = load_frame(str(path))
    np.testing.assert_allclose(f.data[0, 0], [1.0, 0.0, 128 / 255])


def test_load_black_ppm(tmp_path):
    path = tmp_path / "black.ppm"
    path.write_bytes(b"P6\n2 2\n255\n" + bytes(12))
    f = load_frame(str(path))
    assert f.height == 2 and f.width == 2
    assert f.data.max() == 0.0


def test_ppm_header_comments(tmp_path):
    path = tmp_path / "c.ppm"
    path.write_bytes(b"P6\n# a comment\n1 1\n255\n" + bytes([10, 20, 30]))
    f = load_frame(str(path))
    np.testing.assert_allclose(f.data[0, 0], np.array([10, 20, 30]) / 255.0)


@pytest.mark.parametrize("ext", [".png", ".ppm"])
def test_round_trip_quantization_bound(tmp_path, rng, ext):
    frame = Frame(rng.uniform(0.0, 1.0, size=(4, 4, 3)))
    path = str(tmp_path / f"rt{ext}")
    save_frame(frame, path)
    back = load_frame(path)
    assert np.abs(back.data - frame.data).max() <= 1.0 / 255.0


def test_save_rounds_half_up(tmp_path):
    assert quantize_8bit(np.array([[[1.0, 1.0, 1.0]]]))[0, 0, 0] == 255
    assert quantize_8bit(np.array([[[0.5, 0.5, 0.5]]]))[0, 0, 0] == 128  # 127.5 rounds up
    # post-arithmetic drift clamps instead of wrapping
    assert quantize_8bit(np.array([[[1.0000001, 0.0, 0.0]]]))[0, 0, 0] == 255


def test_rgba_alpha_dropped(tmp_path):
    from PIL import Image

    path = tmp_path / "a.png"
    Image.fromarray(np.array([[[10, 20, 30, 77]]], dtype=np.uint8), mode="RGBA").save(path)
    f = load_frame(str(path))
    np.testing.assert_allclose(f.data[0, 0], np.array([10, 20, 30]) / 255.0)


def test_load_unsupported_format(tmp_path):
    path = tmp_path / "x.ppm"
    path.write_bytes(b"P3\n1 1\n255\n1 2 3\n")  # ASCII PPM is not supported
    with pytest.raises(ValueError):
        load_frame(str(path))


def test_load_missing_file(tmp_path):
    with pytest.raises(ValueError):
        load_frame(str(tmp_path / "nope.png"))


def test_sequence_lexicographic_order(tmp_path, rng):
    a = Frame(np.full((2, 2, 3), 0.25))
    b = Frame(np.full((2, 2, 3), 0.75))
    save_frame(b, str(tmp_path / "f002.png"))
    save_frame(a, str(tmp_path / "f001.png"))
    seq = load_sequence(str(tmp_path))
    assert len(seq) == 2
    assert seq.frames[0].data[0, 0, 0] < seq.frames[1].data[0, 0, 0]


def test_sequence_mixed_dimensions(tmp_path):
    save_frame(Frame(np.zeros((2, 2, 3))), str(tmp_path / "a.png"))
    save_frame(Frame(np.zeros((3, 2, 3))), str(tmp_path / "b.png"))
    with pytest.raises(ValueError):
        load_sequence(str(tmp_path))


def test_sequence_empty_dir(tmp_path):
    with pytest.raises(ValueError):
        load_sequence(str(tmp_path))


def test_resample_constant_half():
    frame = Frame(np.full((4, 4, 3), 0.42))
    out = resample(frame, Fraction(1, 2))
    assert (out.height, out.width) == (2, 2)
    np.testing.assert_allclose(out.data, 0.42, atol=1e-12)


def test_resample_identity_bit_exact(rng):
    frame = Frame(rng.uniform(size=(5, 7, 3)))
    out = resample(frame, 1)
    np.testing.assert_array_equal(out.data, frame.data)


def test_resample_third_floor_dims():
    frame = Frame(np.zeros((7, 10, 3)))
    out = resample(frame, Fraction(1, 3))
    assert (out.height, out.width) == (2, 3)


def test_resample_upsample_monotone_rows():
    # 2x2 columns [0, 1]; derived by hand: row samples at source x of
    # -0.25, 0.25, 0.75, 1.25 clamp to values 0, 0.25, 0.75, 1.
    data = np.zeros((2, 2, 3))
    data[:, 1, :] = 1.0
    out = resample(Frame(data), (4, 4))
    np.testing.assert_allclose(out.data[0, :, 0], [0.0, 0.25, 0.75, 1.0], atol=1e-12)
    for row in out.data[:, :, 0]:
        assert np.all(np.diff(row) >= 0.0)


def test_resample_degenerate_errors():
    frame = Frame(np.zeros((2, 2, 3)))
    with pytest.raises(ValueError):
        resample(frame, (0, 4))
    with pytest.raises(ValueError):
        resample(frame, Fraction(1, 3))  # floor(2/3) = 0


def test_resample_rejects_unlisted_rate():
    frame = Frame(np.zeros((8, 8, 3)))
    with pytest.raises(ValueError):
        resample(frame, Fraction(2, 3))
