"""Hierarchical binary cross-entropy: BCE plus a scaled parent/child inconsistency penalty.

Two indicator modes are supported. ``"hard"`` uses the literal step
``1{y_parent < t and y_child > t}``, which has zero gradient almost
everywhere. ``"soft"`` replaces it by ``sigmoid((t - y_parent)/tau) *
sigmoid((y_child - t)/tau)`` so the penalty can shape training gradients.
Both the BCE term and the penalty are averaged over the batch and summed
over labels / edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .penalty import PenaltyTable

HARD = "hard"
SOFT = "soft"


@dataclass(frozen=True)
class LossConfig:
    lam: float = 0.0
    mode: str = HARD
    tau: float = 0.05
    threshold: float = 0.5
    prediction_clip: float = 1e-7

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if self.mode not in (HARD, SOFT):
            raise ValueError(f"mode must be 'hard' or 'soft', got {self.mode!r}")
        if self.mode == SOFT and not self.tau > 0:
            raise ValueError("soft mode needs tau > 0")
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")
        if not 0 < self.prediction_clip < min(self.threshold, 0.5):
            raise ValueError("prediction_clip must lie in (0, min(threshold, 0.5))")


@dataclass(frozen=True)
class LossValue:
    total: float
    bce: float
    penalty_sum: float
    triggered_edges: int


def _check_pair(y_true, y_pred):
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.shape != y_pred.shape or y_pred.ndim != 2:
        raise ValueError(f"shape mismatch: y_true {y_true.shape} vs y_pred {y_pred.shape}")
    if np.isnan(y_true).any() or np.isnan(y_pred).any():
        raise ValueError("NaN in loss inputs")
    return y_true, y_pred


def bce(y_true, y_pred, prediction_clip: float = 1e-7) -> float:
    y_true, y_pred = _check_pair(y_true, y_pred)
    p = np.clip(y_pred, prediction_clip, 1.0 - prediction_clip)
    ll = y_true * np.log(p) + (1.0 - y_true) * np.log1p(-p)
    return float(-ll.sum() / y_true.shape[0])


def _edge_arrays(y_pred, table: PenaltyTable):
    parents, children, weights = table.arrays()
    n_labels = y_pred.shape[1]
    if parents.size and (parents.max() >= n_labels or children.max() >= n_labels):
        raise ValueError(f"penalty table references a label index >= {n_labels}")
    return parents, children, weights


def _indicators(y_pred, parents, children, cfg: LossConfig):
    yp = y_pred[:, parents]
    yc = y_pred[:, children]
    t = cfg.threshold
    if cfg.mode == HARD:
        return ((yp < t) & (yc > t)).astype(np.float64), None, None
    sp = expit((t - yp) / cfg.tau)
    sc = expit((yc - t) / cfg.tau)
    return sp * sc, sp, sc


def hierarchy_penalty(y_pred, table: PenaltyTable, cfg: LossConfig) -> float:
    """Batch-averaged sum over edges of ``penalty(p, c) * indicator(p, c)``."""
    y_pred = np.asarray(y_pred, dtype=np.float64)
    parents, children, weights = _edge_arrays(y_pred, table)
    if not parents.size:
        return 0.0
    ind, _, _ = _indicators(y_pred, parents, children, cfg)
    return float((ind * weights).sum() / y_pred.shape[0])


def hbce(y_true, y_pred, table: PenaltyTable | None, cfg: LossConfig) -> LossValue:
    y_true, y_pred = _check_pair(y_true, y_pred)
    base = bce(y_true, y_pred, cfg.prediction_clip)
    if table is None or not len(table):
        return LossValue(base, base, 0.0, 0)
    parents, children, _ = _edge_arrays(y_pred, table)
    t = cfg.threshold
    triggered = int(((y_pred[:, parents] < t) & (y_pred[:, children] > t)).sum())
    pen = hierarchy_penalty(y_pred, table, cfg)
    if cfg.lam == 0:
        return LossValue(base, base, pen, triggered)
    return LossValue(base + cfg.lam * pen, base, pen, triggered)


def hbce_grad(y_true, y_pred, table: PenaltyTable | None, cfg: LossConfig) -> np.ndarray:
    """Gradient of the total loss with respect to ``y_pred``.

    The BCE part is evaluated on clipped predictions. In hard mode the
    penalty contributes nothing.
    """
    y_true, y_pred = _check_pair(y_true, y_pred)
    n = y_true.shape[0]
    p = np.clip(y_pred, cfg.prediction_clip, 1.0 - cfg.prediction_clip)
    grad = (p - y_true) / (p * (1.0 - p)) / n
    if table is None or not len(table) or cfg.lam == 0 or cfg.mode == HARD:
        return grad
    parents, children, weights = _edge_arrays(y_pred, table)
    _, sp, sc = _indicators(y_pred, parents, children, cfg)
    scale = cfg.lam * weights / (cfg.tau * n)
    d_parent = -scale * sc * sp * (1.0 - sp)
    d_child = scale * sp * sc * (1.0 - sc)
    # np.add.at accumulates correctly when a label appears on several edges
    np.add.at(grad, (slice(None), parents), d_parent)
    np.add.at(grad, (slice(None), children), d_child)
    return grad
