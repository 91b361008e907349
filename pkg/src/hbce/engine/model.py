"""Toy classification head: conv -> ReLU -> GAP -> dense+ReLU -> dropout -> dense+sigmoid.

All arithmetic is float64. Images are single-channel ``(N, H, W)`` arrays.
The convolution is stride 1 with zero "same" padding, so the final feature
maps keep the input resolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit

PARAM_NAMES = ("conv_w", "conv_b", "dense_w", "dense_b", "out_w", "out_b")


class ShapeMismatchError(ValueError):
    pass


class StaleCacheError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    height: int
    width: int
    output_labels: int
    conv_filters: int = 8
    conv_kernel: int = 3
    dense_units: int = 32
    dropout_rate: float = 0.5

    def __post_init__(self):
        dims = (self.height, self.width, self.output_labels, self.conv_filters,
                self.conv_kernel, self.dense_units)
        if min(dims) <= 0:
            raise ValueError(f"all model dimensions must be positive, got {dims}")
        if self.conv_kernel % 2 == 0:
            raise ValueError("conv_kernel must be odd for same padding")
        if not 0 <= self.dropout_rate < 1:
            raise ValueError("dropout_rate must lie in [0, 1)")

    def param_shapes(self) -> dict:
        f, k, d, L = self.conv_filters, self.conv_kernel, self.dense_units, self.output_labels
        return {
            "conv_w": (f, k, k),
            "conv_b": (f,),
            "dense_w": (f, d),
            "dense_b": (d,),
            "out_w": (d, L),
            "out_b": (L,),
        }


class Classifier:
    """Model configuration plus its learnable parameters.

    ``version`` is bumped on every parameter replacement so that forward
    caches computed against older weights are rejected by :func:`backward`.
    """

    def __init__(self, config: ModelConfig, params: dict):
        shapes = config.param_shapes()
        if set(params) != set(shapes):
            raise ShapeMismatchError(f"expected parameters {sorted(shapes)}, got {sorted(params)}")
        for name, shape in shapes.items():
            if tuple(params[name].shape) != shape:
                raise ShapeMismatchError(
                    f"{name}: expected shape {shape}, got {tuple(params[name].shape)}")
        self.config = config
        self.params = {name: np.asarray(params[name], dtype=np.float64) for name in PARAM_NAMES}
        self.version = 0

    def set_params(self, params: dict):
        self.params = {name: params[name] for name in PARAM_NAMES}
        self.version += 1

    def copy(self) -> "Classifier":
        return Classifier(self.config, {k: v.copy() for k, v in self.params.items()})

    def n_parameters(self) -> int:
        return sum(v.size for v in self.params.values())


def init_model(config: ModelConfig, seed: int = 0) -> Classifier:
    """He-uniform weights (limit sqrt(6 / fan_in)), zero biases."""
    rng = np.random.default_rng(seed)
    shapes = config.param_shapes()
    fan_in = {
        "conv_w": config.conv_kernel ** 2,
        "dense_w": config.conv_filters,
        "out_w": config.dense_units,
    }
    params = {}
    for name in PARAM_NAMES:
        if name in fan_in:
            limit = np.sqrt(6.0 / fan_in[name])
            params[name] = rng.uniform(-limit, limit, size=shapes[name])
        else:
            params[name] = np.zeros(shapes[name])
    return Classifier(config, params)


def zero_model(config: ModelConfig) -> Classifier:
    shapes = config.param_shapes()
    return Classifier(config, {name: np.zeros(shapes[name]) for name in PARAM_NAMES})


def _im2col(x: np.ndarray, k: int) -> np.ndarray:
    pad = k // 2
    xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad)))
    win = sliding_window_view(xp, (k, k), axis=(1, 2))
    n, h, w = x.shape
    return win.reshape(n, h * w, k * k)


def _as_rng(rng_seed):
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)


def forward(model: Classifier, batch, train_mode: bool = False, rng_seed=None):
    """Run the network.

    Returns
    -------
    predictions : ndarray, shape (N, L)
        Sigmoid probabilities.
    cache : dict
        Intermediate activations for :func:`backward`; ``cache["features"]``
        holds the post-ReLU conv feature maps of shape ``(N, H, W, F)``.
    """
    cfg = model.config
    x = np.asarray(batch, dtype=np.float64)
    if x.ndim == 2:
        x = x[None]
    if x.ndim != 3 or x.shape[1:] != (cfg.height, cfg.width):
        raise ShapeMismatchError(
            f"expected batch of shape (N, {cfg.height}, {cfg.width}), got {np.shape(batch)}")
    P = model.params
    n = x.shape[0]
    hw = cfg.height * cfg.width
    cols = _im2col(x, cfg.conv_kernel)
    conv_pre = cols @ P["conv_w"].reshape(cfg.conv_filters, -1).T + P["conv_b"]
    feat = np.maximum(conv_pre, 0.0)
    gap = feat.sum(axis=1) / hw
    dense_pre = gap @ P["dense_w"] + P["dense_b"]
    hidden = np.maximum(dense_pre, 0.0)
    if train_mode and cfg.dropout_rate > 0:
        keep = 1.0 - cfg.dropout_rate
        mask = (_as_rng(rng_seed).random(hidden.shape) < keep) / keep
        dropped = hidden * mask
    else:
        mask = None
        dropped = hidden
    logits = dropped @ P["out_w"] + P["out_b"]
    pred = expit(logits)
    cache = {
        "version": model.version,
        "n": n,
        "cols": cols,
        "conv_pre": conv_pre,
        "features": feat.reshape(n, cfg.height, cfg.width, cfg.conv_filters),
        "gap": gap,
        "dense_pre": dense_pre,
        "dropped": dropped,
        "mask": mask,
        "logits": logits,
        "pred": pred,
    }
    return pred, cache


def backward(model: Classifier, cache: dict, grad_pred=None, grad_logits=None) -> dict:
    """Parameter gradients given the upstream gradient on predictions (or on logits)."""
    if cache.get("version") != model.version:
        raise StaleCacheError("forward cache was computed with different parameters")
    cfg = model.config
    P = model.params
    n = cache["n"]
    shape = (n, cfg.output_labels)
    if grad_logits is None:
        grad_pred = np.asarray(grad_pred, dtype=np.float64)
        if grad_pred.shape != shape:
            raise ShapeMismatchError(f"upstream gradient shape {grad_pred.shape}, expected {shape}")
        pred = cache["pred"]
        d_logits = grad_pred * pred * (1.0 - pred)
    else:
        d_logits = np.asarray(grad_logits, dtype=np.float64)
        if d_logits.shape != shape:
            raise ShapeMismatchError(f"upstream gradient shape {d_logits.shape}, expected {shape}")

    grads = {
        "out_w": cache["dropped"].T @ d_logits,
        "out_b": d_logits.sum(axis=0),
    }
    d_hidden = d_logits @ P["out_w"].T
    if cache["mask"] is not None:
        d_hidden = d_hidden * cache["mask"]
    d_dense = d_hidden * (cache["dense_pre"] > 0)
    grads["dense_w"] = cache["gap"].T @ d_dense
    grads["dense_b"] = d_dense.sum(axis=0)
    d_gap = d_dense @ P["dense_w"].T
    hw = cfg.height * cfg.width
    d_conv = (cache["conv_pre"] > 0) * (d_gap[:, None, :] / hw)
    k = cfg.conv_kernel
    grads["conv_w"] = np.einsum("npf,npk->fk", d_conv, cache["cols"]).reshape(cfg.conv_filters, k, k)
    grads["conv_b"] = d_conv.sum(axis=(0, 1))
    return {name: grads[name] for name in PARAM_NAMES}


def predict(model: Classifier, images, batch_size: int = 256) -> np.ndarray:
    """Deterministic (dropout-off) predictions, computed in chunks."""
    images = np.asarray(images, dtype=np.float64)
    out = [forward(model, images[i:i + batch_size])[0] for i in range(0, len(images), batch_size)]
    if not out:
        return np.zeros((0, model.config.output_labels))
    return np.concatenate(out, axis=0)
