import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hbce import pnm
from hbce.engine import ModelConfig, forward, init_model
from hbce.engine.model import Classifier
from hbce.explain import (
    CLIPPED,
    COLOR_RAMP,
    Heatmap,
    clip,
    export_heatmap,
    grad_cam,
    normalize_clip,
    peak_cell,
    quantize,
    to_gray,
    upsample_nearest,
)

# zeros plus values well inside the normal range, so scaling by c never underflows
raw_maps = arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(1, 8)),
                  elements=st.one_of(st.just(0.0), st.floats(1e-100, 1e3)))


def one_channel_model(h=5, w=5):
    """Identity-like head: one conv channel, one always-active dense unit, unit output weight."""
    cfg = ModelConfig(h, w, 1, conv_filters=1, conv_kernel=3, dense_units=1, dropout_rate=0.0)
    rng = np.random.default_rng(0)
    params = {"conv_w": rng.standard_normal((1, 3, 3)), "conv_b": np.array([0.1]),
              "dense_w": np.array([[1.0]]), "dense_b": np.array([10.0]),
              "out_w": np.array([[1.0]]), "out_b": np.array([0.0])}
    return Classifier(cfg, params)


class TestGradCam:
    def test_closed_form_one_channel(self, rng):
        m = one_channel_model()
        x = rng.random((5, 5))
        _, cache = forward(m, x)
        # d logit / d A(i, j) = dense_w * out_w / (H W), constant over space
        w = 1.0 / 25
        expected = np.maximum(w * cache["features"][0, :, :, 0], 0)
        np.testing.assert_allclose(grad_cam(m, x, 0).values, expected, rtol=1e-14)

    def test_constant_score_gives_zero_map(self, rng):
        m = init_model(ModelConfig(5, 5, 2), 1)
        params = dict(m.params)
        params["out_w"] = params["out_w"].copy()
        params["out_w"][:, 1] = 0
        m.set_params(params)
        assert not grad_cam(m, rng.random((5, 5)), 1).values.any()

    def test_non_negative(self, rng):
        m = init_model(ModelConfig(6, 6, 3), 2)
        for label in range(3):
            assert (grad_cam(m, rng.random((6, 6)), label).values >= 0).all()

    def test_bad_label(self):
        m = init_model(ModelConfig(4, 4, 2), 0)
        with pytest.raises(IndexError):
            grad_cam(m, np.zeros((4, 4)), 2)

    def test_matches_finite_difference_weights(self, rng):
        m = init_model(ModelConfig(5, 5, 2, conv_filters=3, dense_units=4), 3)
        x = rng.random((5, 5))
        _, cache = forward(m, x)
        feats = cache["features"][0]
        # logit as a function of the feature maps, perturbed directly
        P = m.params

        def logit(a):
            gap = a.mean(axis=(0, 1))
            hidden = np.maximum(gap @ P["dense_w"] + P["dense_b"], 0)
            return (hidden @ P["out_w"] + P["out_b"])[1]

        grad = np.zeros_like(feats)
        for idx in np.ndindex(feats.shape):
            up, dn = feats.copy(), feats.copy()
            up[idx] += 1e-6
            dn[idx] -= 1e-6
            grad[idx] = (logit(up) - logit(dn)) / 2e-6
        weights = grad.mean(axis=(0, 1))
        expected = np.maximum(np.einsum("ijk,k->ij", feats, weights), 0)
        np.testing.assert_allclose(grad_cam(m, x, 1).values, expected, rtol=1e-6, atol=1e-12)


class TestNormalizeClip:
    def test_linear_ramp(self):
        out = normalize_clip(Heatmap(np.array([0.0, 2.0, 4.0])))
        np.testing.assert_allclose(out.values, [0, 0.5, 1])

    def test_near_flat(self):
        out = normalize_clip(Heatmap(np.array([1.0, 1.2])))
        np.testing.assert_allclose(out.values, [1 / 1.2, 1])

    def test_all_zero(self):
        out = normalize_clip(Heatmap(np.zeros((3, 3))))
        assert not out.values.any() and out.state == CLIPPED

    @settings(max_examples=100, deadline=None)
    @given(raw_maps, st.floats(1e-3, 1e3))
    def test_scale_invariance(self, raw, c):
        a = normalize_clip(Heatmap(raw)).values
        b = normalize_clip(Heatmap(c * raw)).values
        # division by the max is exact up to one rounding on each side near the threshold
        near = np.abs(a - 0.5) < 1e-12
        np.testing.assert_allclose(a[~near], b[~near], rtol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(raw_maps)
    def test_clipped_range(self, raw):
        v = normalize_clip(Heatmap(raw)).values
        assert ((v == 0) | ((v >= 0.5) & (v <= 1))).all()

    @settings(max_examples=100, deadline=None)
    @given(raw_maps)
    def test_idempotent(self, raw):
        once = normalize_clip(Heatmap(raw))
        np.testing.assert_array_equal(clip(once).values, once.values)
        np.testing.assert_array_equal(normalize_clip(once).values, once.values)


class TestQuantizeExport:
    def test_two_bins_three_levels(self):
        levels = quantize(np.linspace(0, 1, 101), bins=2)
        assert len(np.unique(levels)) <= 3

    @settings(max_examples=100, deadline=None)
    @given(arrays(np.float64, 50, elements=st.floats(0, 1)), st.integers(2, 12))
    def test_at_most_bins_plus_one(self, values, bins):
        assert len(np.unique(quantize(values, bins))) <= bins + 1

    def test_gray_endpoints(self):
        np.testing.assert_array_equal(to_gray(quantize(np.array([1.0, 0.0]))), [0, 255])

    def test_single_bin_rejected(self):
        with pytest.raises(ValueError):
            quantize(np.zeros(3), bins=1)

    def test_upsample_nearest(self):
        out = upsample_nearest(np.array([[1, 2], [3, 4]]), (4, 4))
        np.testing.assert_array_equal(out[:2, :2], 1)
        np.testing.assert_array_equal(out[2:, 2:], 4)

    def test_export_files(self, tmp_path):
        h = normalize_clip(Heatmap(np.array([[0.0, 1.0], [0.6, 0.2]])))
        path, side = export_heatmap(h, np.full((4, 4), 0.5), tmp_path / "cam.pgm", bins=5)
        pixels, maxval = pnm.read_pnm(path)
        assert maxval == 255 and pixels.shape == (4, 4)
        assert pixels[0, 3] == 0 and pixels[0, 0] == 255
        assert pnm.read_pnm(side)[0].shape == (4, 8)
        assert path.read_bytes()[:2] == b"P5"

    def test_export_color(self, tmp_path):
        h = normalize_clip(Heatmap(np.array([[0.0, 1.0]])))
        path, _ = export_heatmap(h, np.zeros((2, 4)), tmp_path / "cam.ppm", color=True)
        pixels, _ = pnm.read_pnm(path)
        assert path.read_bytes()[:2] == b"P6"
        np.testing.assert_array_equal(pixels[0, 0], COLOR_RAMP[0])
        np.testing.assert_array_equal(pixels[0, 3], COLOR_RAMP[-1])

    def test_export_requires_clipped(self, tmp_path):
        with pytest.raises(ValueError):
            export_heatmap(Heatmap(np.ones((2, 2))), np.zeros((2, 2)), tmp_path / "x.pgm")

    def test_peak_cell(self):
        assert peak_cell(Heatmap(np.array([[0, 1], [3, 2]]))) == (1, 0)
