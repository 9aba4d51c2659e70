import math

import numpy as np
import pytest

from conftest import textured_frame
from llve.frames import Frame, FrameSequence
from llve.metrics import (
    color_consistency,
    exposure_consistency,
    frame_difference_map,
    mabd,
    mae,
    pair_report,
    psnr,
    sequence_report,
    ssim,
    tssim,
)


def const_frame(v, h=16, w=16):
    return Frame(np.full((h, w, 3), float(v)))


def const_rgb(r, g, b, h=1, w=1):
    data = np.empty((h, w, 3))
    data[:, :, 0] = r
    data[:, :, 1] = g
    data[:, :, 2] = b
    return Frame(data)


class TestPsnr:
    def test_identical_capped(self):
        f = textured_frame(8, 8)
        assert psnr(f, f) == 100.0

    def test_black_vs_white(self):
        assert psnr(const_frame(0.0), const_frame(1.0)) == 0.0

    def test_half_gray(self):
        # MSE 0.25 -> 10 log10(4)
        got = psnr(const_frame(0.0), const_frame(0.5))
        assert math.isclose(got, 10.0 * math.log10(4.0), rel_tol=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            psnr(const_frame(0.0, 4, 4), const_frame(0.0, 4, 5))


class TestSsim:
    def test_identical_is_one(self):
        f = textured_frame(24, 24)
        assert ssim(f, f) == pytest.approx(1.0, abs=1e-12)

    def test_constant_pair_is_one(self):
        assert ssim(const_frame(0.5), const_frame(0.5)) == pytest.approx(1.0, abs=1e-12)

    def test_negative_image_low(self):
        f = textured_frame(32, 32)
        neg = Frame(1.0 - f.data)
        assert ssim(f, neg) < 0.5

    def test_matches_reference_implementation(self, rng):
        skimage = pytest.importorskip("skimage.metrics")
        from llve.frames import luminance

        for _ in range(5):
            a = Frame(rng.uniform(size=(20, 26, 3)))
            b = Frame(np.clip(a.data + rng.normal(scale=0.1, size=(20, 26, 3)), 0, 1))
            want = skimage.structural_similarity(
                luminance(a.data),
                luminance(b.data),
                gaussian_weights=True,
                sigma=1.5,
                use_sample_covariance=False,
                data_range=1.0,
            )
            assert ssim(a, b) == pytest.approx(want, abs=1e-7)

    def test_too_small_errors(self):
        with pytest.raises(ValueError):
            ssim(const_frame(0.1, 8, 8), const_frame(0.1, 8, 8))


class TestMae:
    def test_identical(self):
        f = textured_frame(8, 8)
        assert mae(f, f) == 0.0

    def test_full_scale(self):
        assert mae(const_frame(0.0), const_frame(1.0)) == 255.0

    def test_fifth(self):
        assert mae(const_frame(0.0), const_frame(0.2)) == pytest.approx(51.0, abs=1e-9)


class TestTemporal:
    def test_tssim_identical_frames(self):
        f = textured_frame(16, 16)
        seq = FrameSequence([f, f, f])
        assert tssim(seq) == pytest.approx(1.0, abs=1e-12)

    def test_tssim_two_frames_equals_pair(self):
        a = textured_frame(16, 16)
        b = textured_frame(16, 16, xoff=1.0)
        assert tssim(FrameSequence([a, b])) == pytest.approx(ssim(a, b), abs=1e-15)

    def test_tssim_alternating_mean(self):
        a = const_frame(0.2)
        b = const_frame(0.8)
        pair = ssim(a, b)
        assert tssim(FrameSequence([a, b, a])) == pytest.approx(pair, abs=1e-15)

    def test_tssim_too_short(self):
        with pytest.raises(ValueError):
            tssim(FrameSequence([const_frame(0.5)]))

    def test_mabd_identical(self):
        f = const_frame(0.4)
        assert mabd(FrameSequence([f, f, f])) == 0.0

    def test_mabd_staircase(self):
        seq = FrameSequence([const_frame(v) for v in (0.1, 0.2, 0.3)])
        assert mabd(seq) == pytest.approx(0.1, abs=1e-12)

    def test_mabd_alternating(self):
        seq = FrameSequence([const_frame(v) for v in (0.0, 1.0, 0.0)])
        assert mabd(seq) == pytest.approx(1.0, abs=1e-12)

    def test_mabd_constant_mean_content_change(self, rng):
        base = rng.uniform(size=(16, 16, 3))
        shuffled = base.reshape(-1, 3)[rng.permutation(16 * 16)].reshape(16, 16, 3)
        seq = FrameSequence([Frame(base), Frame(shuffled)])
        assert mabd(seq) == pytest.approx(0.0, abs=1e-12)


class TestConsistency:
    def test_identical_zero(self):
        f = textured_frame(8, 8)
        assert exposure_consistency(f, f) == 0.0
        assert color_consistency(f, f) == 0.0

    def test_exposure_single_pixel(self):
        e_t = const_rgb(0.1, 0.1, 0.1)
        e_t1 = const_rgb(0.2, 0.2, 0.2)
        assert exposure_consistency(e_t1, e_t) == pytest.approx(0.3, abs=1e-12)

    def test_exposure_channel_permutation_invariant(self, rng):
        data = rng.uniform(size=(6, 6, 3))
        permuted = data[:, :, [2, 0, 1]]
        assert exposure_consistency(Frame(data), Frame(permuted)) == pytest.approx(0.0, abs=1e-12)

    def test_exposure_spatial_permutation_invariant(self, rng):
        a = rng.uniform(size=(5, 5, 3))
        b = rng.uniform(size=(5, 5, 3))
        perm = rng.permutation(25)
        a_p = a.reshape(-1, 3)[perm].reshape(5, 5, 3)
        b_p = b.reshape(-1, 3)[perm].reshape(5, 5, 3)
        got = exposure_consistency(Frame(a), Frame(b))
        got_p = exposure_consistency(Frame(a_p), Frame(b_p))
        assert got == pytest.approx(got_p, rel=1e-12)

    def test_color_single_pixel_exact(self):
        c = 1e-4
        e_t = const_rgb(1.0, 0.0, 0.0)
        e_t1 = const_rgb(0.0, 1.0, 0.0)
        # two channels each differ by 1 - c/(1+c); third is equal
        want = 2.0 * (1.0 - c / (1.0 + c))
        assert color_consistency(e_t1, e_t, c) == pytest.approx(want, rel=1e-12)

    def test_color_black_pixels_zero(self):
        z = const_rgb(0.0, 0.0, 0.0)
        assert color_consistency(z, z) == 0.0

    def test_color_requires_positive_delta(self):
        f = const_frame(0.5, 4, 4)
        with pytest.raises(ValueError):
            color_consistency(f, f, c=0.0)

    def test_brightness_shift_exposure_vs_color(self):
        base = textured_frame(16, 16)
        brighter = Frame(np.clip(base.data * 1.2, 0, 1))
        assert exposure_consistency(brighter, base) > 1.0
        # pure gain cancels in channel ratios
        n = 16 * 16
        assert color_consistency(brighter, base) / n < 0.01


class TestDifferenceMap:
    def test_identical_zero(self):
        f = textured_frame(8, 8)
        assert frame_difference_map(f, f).data.max() == 0.0

    def test_full_scale(self):
        d = frame_difference_map(const_frame(0.0), const_frame(1.0))
        np.testing.assert_array_equal(d.data, 1.0)

    def test_symmetric(self, rng):
        a = Frame(rng.uniform(size=(6, 6, 3)))
        b = Frame(rng.uniform(size=(6, 6, 3)))
        np.testing.assert_array_equal(
            frame_difference_map(a, b).data, frame_difference_map(b, a).data
        )


class TestReports:
    def test_pair_report_fields(self):
        a = textured_frame(16, 16)
        rep = pair_report(a, a).to_dict()
        assert rep["psnr"] == 100.0
        assert rep["ssim"] == pytest.approx(1.0, abs=1e-12)
        assert rep["mae"] == 0.0
        assert rep["exposure_consistency"] == 0.0
        assert rep["tssim"] is None

    def test_sequence_report_static(self):
        f = textured_frame(16, 16)
        rep = sequence_report(FrameSequence([f, f, f]))
        assert rep.tssim == pytest.approx(1.0, abs=1e-12)
        assert rep.mabd == 0.0
        assert rep.exposure_consistency == pytest.approx(0.0, abs=1e-9)

    def test_sequence_report_with_reference(self):
        seq = FrameSequence([textured_frame(16, 16), textured_frame(16, 16, xoff=1.0)])
        rep = sequence_report(seq, seq)
        assert rep.psnr == 100.0
        assert rep.mae == 0.0
