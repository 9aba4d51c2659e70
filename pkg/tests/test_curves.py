import numpy as np
import pytest

from llve.curves import CurveParamMap, GammaMap, apply_gamma_curve, apply_quadratic_curve, iterated_gamma
from llve.frames import Frame


def const_frame(v, h=4, w=4):
    return Frame(np.full((h, w, 3), v))


def const_gamma(g, h=4, w=4, bounds=None):
    return GammaMap(np.full((h, w, 3), g), bounds=bounds)


def test_gamma_quarter_to_half():
    out = apply_gamma_curve(const_frame(0.25), const_gamma(0.5))
    np.testing.assert_allclose(out.data, 0.5, atol=1e-15)


def test_gamma_identity_exponent(rng):
    frame = Frame(rng.uniform(size=(5, 6, 3)))
    out = apply_gamma_curve(frame, const_gamma(1.0, 5, 6))
    np.testing.assert_array_equal(out.data, frame.data)


def test_gamma_zero_base_stays_zero():
    out = apply_gamma_curve(const_frame(0.0), const_gamma(0.5))
    assert out.data.max() == 0.0


def test_gamma_composition(rng):
    frame = Frame(rng.uniform(size=(6, 6, 3)))
    ga = rng.uniform(0.5, 2.0, size=(6, 6, 3))
    gb = rng.uniform(0.5, 2.0, size=(6, 6, 3))
    twice = apply_gamma_curve(apply_gamma_curve(frame, GammaMap(ga)), GammaMap(gb))
    once = apply_gamma_curve(frame, GammaMap(ga * gb))
    np.testing.assert_allclose(twice.data, once.data, atol=1e-6)


def test_gamma_dim_mismatch():
    with pytest.raises(ValueError):
        apply_gamma_curve(const_frame(0.5, 4, 4), const_gamma(1.0, 4, 5))


def test_gamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        GammaMap(np.zeros((2, 2, 3)), bounds=None)
    with pytest.raises(ValueError):
        GammaMap(np.full((2, 2, 3), -0.5), bounds=None)


def test_gamma_bounds_checked():
    with pytest.raises(ValueError):
        GammaMap(np.full((2, 2, 3), 8.0))  # default bounds [0.25, 4]
    GammaMap(np.full((2, 2, 3), 8.0), bounds=None)  # unbounded map is fine


def test_gamma_range_preservation(rng):
    for _ in range(20):
        frame = Frame(rng.uniform(size=(4, 4, 3)))
        gam = GammaMap(rng.uniform(0.25, 4.0, size=(4, 4, 3)))
        out = apply_gamma_curve(frame, gam)
        assert out.data.min() >= 0.0 and out.data.max() <= 1.0


def test_gamma_monotone_in_input(rng):
    a = rng.uniform(0.0, 0.5, size=(4, 4, 3))
    b = a + rng.uniform(0.0, 0.5, size=(4, 4, 3))
    gam = GammaMap(rng.uniform(0.25, 4.0, size=(4, 4, 3)))
    out_a = apply_gamma_curve(Frame(a), gam)
    out_b = apply_gamma_curve(Frame(np.clip(b, 0, 1)), gam)
    assert np.all(out_a.data <= out_b.data + 1e-15)


def test_gamma_brightens_and_darkens(rng):
    vals = rng.uniform(0.05, 0.95, size=(4, 4, 3))
    frame = Frame(vals)
    bright = apply_gamma_curve(frame, const_gamma(0.5))
    dark = apply_gamma_curve(frame, const_gamma(2.0))
    assert np.all(bright.data > frame.data)
    assert np.all(dark.data < frame.data)


def test_quadratic_zero_params_identity(rng):
    frame = Frame(rng.uniform(size=(4, 4, 3)))
    params = [CurveParamMap(np.zeros((4, 4, 3))) for _ in range(3)]
    out = apply_quadratic_curve(frame, params)
    np.testing.assert_allclose(out.data, frame.data, atol=1e-15)


def test_quadratic_one_step_golden():
    # 0.5 + 1 * 0.5 * (1 - 0.5) = 0.75
    out = apply_quadratic_curve(const_frame(0.5), [CurveParamMap(np.ones((4, 4, 3)))])
    np.testing.assert_allclose(out.data, 0.75, atol=1e-15)


def test_quadratic_two_steps_golden():
    # second step: 0.75 + 0.75 * 0.25 = 0.9375
    out = apply_quadratic_curve(
        const_frame(0.5), [CurveParamMap(np.ones((4, 4, 3)))], iterations=2, reuse_single=True
    )
    np.testing.assert_allclose(out.data, 0.9375, atol=1e-15)


def test_quadratic_range_stays_unit(rng):
    for _ in range(20):
        frame = Frame(rng.uniform(size=(4, 4, 3)))
        params = [CurveParamMap(rng.uniform(-1, 1, size=(4, 4, 3))) for _ in range(4)]
        out = apply_quadratic_curve(frame, params)
        assert out.data.min() >= 0.0 and out.data.max() <= 1.0


def test_quadratic_rejects_large_params():
    with pytest.raises(ValueError):
        CurveParamMap(np.full((2, 2, 3), 1.5))


def test_quadratic_dim_mismatch():
    with pytest.raises(ValueError):
        apply_quadratic_curve(const_frame(0.5, 4, 4), [CurveParamMap(np.zeros((4, 5, 3)))])


def test_iterated_gamma_matches_product(rng):
    frame = Frame(rng.uniform(size=(4, 4, 3)))
    maps = [GammaMap(rng.uniform(0.5, 2.0, size=(4, 4, 3))) for _ in range(3)]
    multi = iterated_gamma(frame, maps)
    prod = maps[0].data * maps[1].data * maps[2].data
    single = apply_gamma_curve(frame, GammaMap(prod, bounds=None))
    np.testing.assert_allclose(multi.data, single.data, atol=1e-9)
