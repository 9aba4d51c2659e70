import numpy as np
import pytest
import torch

from conftest import dark_pattern, to_tensor
from llve_trainer.flow import warp
from llve_trainer.losses import (
    WELL_EXPOSED_LEVEL,
    color_consistency,
    color_constancy,
    exposure_consistency,
    exposure_control,
    illumination_smoothness,
    spatial_consistency,
    temporal_losses,
    zero_dce_losses,
)


def batchify(arr):
    return to_tensor(arr).unsqueeze(0)


class TestImageLosses:
    def test_identity_enhancement_zeroes_spa_and_tva(self, rng):
        x = batchify(dark_pattern(rng, 32, 32))
        gamma = torch.ones_like(x)
        parts = zero_dce_losses(x, x, gamma)
        assert float(parts["l_spa"]) == 0.0
        assert float(parts["l_tva"]) == 0.0

    def test_gray_world_zero_for_equal_channels(self, rng):
        v = rng.uniform(0.0, 1.0, size=(16, 16))
        x = batchify(np.stack([v, v, v], axis=-1))
        assert float(color_constancy(x)) == pytest.approx(0.0, abs=1e-15)

    def test_exposure_zero_at_level(self):
        x = torch.full((1, 3, 32, 32), WELL_EXPOSED_LEVEL, dtype=torch.float64)
        assert float(exposure_control(x)) == pytest.approx(0.0, abs=1e-15)

    def test_all_losses_nonnegative(self, rng):
        x = batchify(rng.uniform(0, 1, size=(32, 32, 3)))
        e = batchify(rng.uniform(0, 1, size=(32, 32, 3)))
        g = batchify(rng.uniform(0.25, 4.0, size=(32, 32, 3)))
        parts = zero_dce_losses(e, x, g)
        assert all(float(v) >= 0.0 for v in parts.values())

    def test_spatial_consistency_penalizes_contrast_loss(self, rng):
        x = batchify(dark_pattern(rng, 32, 32))
        flat = torch.full_like(x, float(x.mean()))
        assert float(spatial_consistency(flat, x)) > 0.0

    def test_smoothness_penalizes_rough_maps(self, rng):
        rough = batchify(rng.uniform(0.25, 4.0, size=(16, 16, 3)))
        smooth = torch.full((1, 3, 16, 16), 1.3, dtype=torch.float64)
        assert float(illumination_smoothness(rough)) > float(illumination_smoothness(smooth))


class TestTemporalLosses:
    def test_identical_static_frames_zero(self, rng):
        f = to_tensor(dark_pattern(rng, 24, 24))
        zero_flow = torch.zeros((24, 24, 2), dtype=torch.float64)
        exp_t, col_t = temporal_losses(f, f, zero_flow)
        assert float(exp_t) == 0.0
        assert float(col_t) == 0.0

    def test_zero_flow_warp_is_identity(self, rng):
        f = to_tensor(dark_pattern(rng, 20, 20))
        out = warp(f, torch.zeros((20, 20, 2), dtype=torch.float64))
        np.testing.assert_allclose(out.numpy(), f.numpy(), atol=1e-12)

    def test_brightness_shift_hits_exposure_not_color(self, rng):
        base = dark_pattern(rng, 24, 24, mean=0.3)
        f_t = to_tensor(base)
        f_t1 = to_tensor(np.clip(base * 1.3, 0, 1))
        zero_flow = torch.zeros((24, 24, 2), dtype=torch.float64)
        exp_t, col_t = temporal_losses(f_t1, f_t, zero_flow)
        n = 24 * 24
        assert float(exp_t) / n > 0.05
        assert float(col_t) / n < 0.01  # pure gain cancels in the ratios


def central_difference_grad(fn, x, eps=1e-6):
    grad = torch.zeros_like(x)
    flat = x.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.numel()):
        orig = float(flat[i])
        flat[i] = orig + eps
        fp = float(fn())
        flat[i] = orig - eps
        fm = float(fn())
        flat[i] = orig
        gflat[i] = (fp - fm) / (2.0 * eps)
    return grad


class TestGradientChecks:
    @pytest.mark.parametrize("loss_fn", [exposure_consistency, color_consistency])
    def test_matches_central_differences(self, rng, loss_fn):
        a = to_tensor(rng.uniform(0.1, 0.9, size=(4, 4, 3)))
        b = to_tensor(rng.uniform(0.1, 0.9, size=(4, 4, 3)))
        for wrt, other, order in (("first", b, 0), ("second", a, 1)):
            x = (a if order == 0 else b).clone().requires_grad_(True)
            args = (x, other) if order == 0 else (other, x)
            loss = loss_fn(*args)
            loss.backward()
            auto = x.grad.detach().clone()
            with torch.no_grad():
                fd = central_difference_grad(lambda: loss_fn(*args), x.detach())
            denom = torch.clamp(fd.abs(), min=1e-3)
            rel = ((auto - fd).abs() / denom).max()
            assert float(rel) <= 1e-4, f"gradient mismatch wrt {wrt} argument: {float(rel)}"
