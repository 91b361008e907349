"""Grad-CAM over the final conv layer, with max-normalisation, threshold clipping and
discretised grey/colour export.

Export convention: activation 1 is drawn black and activation 0 white.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import pnm
from .engine.model import Classifier, forward

RAW, NORMALIZED, CLIPPED = "raw", "normalized", "clipped"

# Colour ramp for --color output, from activation 0 (white) to 1 (black).
COLOR_RAMP = np.array([
    (255, 255, 255),
    (255, 237, 160),
    (254, 178, 76),
    (240, 59, 32),
    (0, 0, 0),
])


@dataclass(frozen=True)
class Heatmap:
    values: np.ndarray
    state: str = RAW

    @property
    def shape(self):
        return self.values.shape


def grad_cam(model: Classifier, image, target_label: int) -> Heatmap:
    """Raw Grad-CAM map for one image and one label, at feature-map resolution.

    The score is the target label's logit. Channel weights are the spatial
    means of d(score)/d(feature map); the map is ReLU of the weighted sum of
    the post-ReLU conv feature maps.
    """
    cfg = model.config
    if not 0 <= target_label < cfg.output_labels:
        raise IndexError(f"label index {target_label} outside 0..{cfg.output_labels - 1}")
    x = np.asarray(image, dtype=np.float64)
    _, cache = forward(model, x[None] if x.ndim == 2 else x[:1])
    P = model.params
    d_hidden = P["out_w"][:, target_label]
    d_dense = d_hidden * (cache["dense_pre"][0] > 0)
    d_gap = P["dense_w"] @ d_dense
    hw = cfg.height * cfg.width
    # d(score)/dA(i, j, k) = d_gap[k] / hw at every position, so its spatial mean is the same.
    grad_maps = np.broadcast_to(d_gap / hw, cache["features"][0].shape)
    weights = grad_maps.mean(axis=(0, 1))
    cam = np.einsum("ijk,k->ij", cache["features"][0], weights)
    return Heatmap(np.maximum(cam, 0.0), RAW)


def normalize(h: Heatmap) -> Heatmap:
    peak = h.values.max(initial=0.0)
    values = h.values / peak if peak > 0 else np.zeros_like(h.values)
    return Heatmap(values, NORMALIZED)


def clip(h: Heatmap, threshold: float = 0.5) -> Heatmap:
    values = np.where(h.values < threshold, 0.0, h.values)
    return Heatmap(values, CLIPPED)


def normalize_clip(h: Heatmap, threshold: float = 0.5) -> Heatmap:
    """Divide by the maximum (when positive) and zero everything below ``threshold``."""
    return clip(normalize(h), threshold)


def upsample_nearest(values, shape) -> np.ndarray:
    values = np.asarray(values)
    h, w = values.shape
    H, W = shape
    rows = (np.arange(H) * h) // H
    cols = (np.arange(W) * w) // W
    return values[np.ix_(rows, cols)]


def quantize(values, bins: int = 5) -> np.ndarray:
    """Map activations in [0, 1] to ``bins`` equal-width levels; exact 0 stays 0.

    A positive value in bin ``b`` becomes the bin's upper edge ``(b + 1) / bins``,
    so the output has at most ``bins + 1`` distinct values.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    b = np.minimum(np.floor(v * bins), bins - 1)
    return np.where(v > 0, (b + 1) / bins, 0.0)


def to_gray(levels) -> np.ndarray:
    """Activation 0 -> 255 (white), activation 1 -> 0 (black)."""
    return np.rint(255.0 * (1.0 - np.asarray(levels))).astype(np.int64)


def to_color(levels) -> np.ndarray:
    idx = np.rint(np.asarray(levels) * (len(COLOR_RAMP) - 1)).astype(int)
    return COLOR_RAMP[idx]


def export_heatmap(h: Heatmap, input_image, path, bins: int = 5, color: bool = False):
    """Write the discretised heatmap and a side-by-side view next to the input image.

    Returns the two written paths ``(heatmap_path, side_by_side_path)``.
    """
    if h.state != CLIPPED:
        raise ValueError("export expects a clipped heatmap; call normalize_clip first")
    image = np.asarray(input_image, dtype=np.float64)
    levels = quantize(upsample_nearest(h.values, image.shape), bins)
    path = Path(path)
    side = path.with_name(path.stem + "_side" + path.suffix)
    gray_input = np.rint(255.0 * np.clip(image, 0.0, 1.0)).astype(np.int64)
    if color:
        rgb = to_color(levels)
        pnm.write_ppm(path, rgb)
        pnm.write_ppm(side, np.concatenate([np.repeat(gray_input[..., None], 3, axis=2), rgb], axis=1))
    else:
        gray = to_gray(levels)
        pnm.write_pgm(path, gray)
        pnm.write_pgm(side, np.concatenate([gray_input, gray], axis=1))
    return path, side


def peak_cell(h: Heatmap):
    """``(row, col)`` of the highest-activation cell (first in row-major order on ties)."""
    return np.unravel_index(int(np.argmax(h.values)), h.values.shape)

