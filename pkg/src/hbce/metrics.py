"""AUROC (Mann-Whitney, ties half credit), aggregates, violation rate and paired t-tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .taxonomy import Taxonomy


class UndefinedAUROCError(ValueError):
    """AUROC needs at least one positive and one negative example."""


class DegenerateTestError(ValueError):
    """Paired differences have zero variance, so the t statistic is undefined."""


@dataclass(frozen=True)
class RocResult:
    auroc: float
    positives: int
    negatives: int


def auroc(scores, labels) -> RocResult:
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels).ravel()
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must have the same length")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = int(labels.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise UndefinedAUROCError(f"AUROC undefined with {n_pos} positives and {n_neg} negatives")
    ranks = rankdata(scores, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return RocResult(float(u / (n_pos * n_neg)), n_pos, n_neg)


def auroc_per_label(y_true, y_score) -> list[RocResult | None]:
    """Per-column AUROC; ``None`` for columns lacking positives or negatives."""
    y_true = np.asarray(y_true)
    y_score = np.asarray(y_score)
    out = []
    for j in range(y_true.shape[1]):
        try:
            out.append(auroc(y_score[:, j], y_true[:, j]))
        except UndefinedAUROCError:
            out.append(None)
    return out


def mean_auroc(per_label) -> float:
    values = [r.auroc for r in per_label if r is not None]
    if not values:
        raise ValueError("no defined AUROC values to average")
    return float(sum(values) / len(values))


def weighted_auroc(per_label, weights=None) -> float:
    """Weighted mean AUROC; defaults to each label's positive count as weight."""
    pairs = [(i, r) for i, r in enumerate(per_label) if r is not None]
    if weights is None:
        w = np.array([r.positives for _, r in pairs], dtype=np.float64)
    else:
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (len(per_label),):
            raise ValueError("one weight per label required")
        if (weights < 0).any():
            raise ValueError("weights must be non-negative")
        w = np.array([weights[i] for i, _ in pairs])
    total = w.sum()
    if not total > 0:
        raise ValueError("total weight is zero")
    a = np.array([r.auroc for _, r in pairs])
    return float((w * a).sum() / total)


def violation_rate(predictions, taxonomy: Taxonomy, threshold: float = 0.5,
                   child_threshold: float | None = None) -> float:
    """Fraction of (sample, edge) pairs with child above and parent below threshold.

    ``child_threshold`` overrides the child-side cut-off (defaults to ``threshold``).
    """
    pred = np.asarray(predictions, dtype=np.float64)
    if not taxonomy.edges or pred.shape[0] == 0:
        return 0.0
    ct = threshold if child_threshold is None else child_threshold
    parents = np.array([p for p, _ in taxonomy.edges])
    children = np.array([c for _, c in taxonomy.edges])
    bad = (pred[:, parents] < threshold) & (pred[:, children] > ct)
    return float(bad.mean())


# Regularized incomplete beta by the modified Lentz continued fraction.
_TINY = 1e-300


def _betacf(a: float, b: float, x: float, max_iter: int = 500, tol: float = 1e-15) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = _TINY if abs(d) < _TINY else d
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = _TINY if abs(d) < _TINY else d
        c = 1.0 + aa / c
        c = _TINY if abs(c) < _TINY else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc_regularized(a: float, b: float, x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_sided_p(t: float, df: float) -> float:
    """Two-sided tail probability of Student's t: P(|T| >= |t|)."""
    a, b = df / 2.0, 0.5
    x = df / (df + t * t)
    if x < (a + 1.0) / (a + b + 2.0):
        return betainc_regularized(a, b, x)
    # near x = 1, pass the complement directly instead of forming 1 - x
    return 1.0 - betainc_regularized(b, a, t * t / (df + t * t))


def paired_t_test(a, b) -> tuple[float, float]:
    """Paired t statistic on ``a - b`` and its two-sided p-value (df = K - 1)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("paired samples must be 1-D and of equal length")
    k = a.size
    if k < 2:
        raise ValueError("paired t-test needs at least two pairs")
    d = a - b
    sd = d.std(ddof=1)
    if sd == 0:
        raise DegenerateTestError("differences have zero variance")
    t = float(d.mean() / (sd / math.sqrt(k)))
    return t, t_two_sided_p(t, k - 1)
