"""Monte Carlo dropout: repeated stochastic forward passes at inference time."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine.model import Classifier, forward


@dataclass(frozen=True)
class McSummary:
    mean: np.ndarray
    std: np.ndarray
    passes: int
    seed: int


def mc_predict(model: Classifier, inputs, n_passes: int = 10, seed: int = 0) -> McSummary:
    """Per-label mean and population standard deviation over ``n_passes`` dropout passes.

    Pass ``i`` draws its dropout mask from ``seed + i``. A single image
    ``(H, W)`` yields ``(L,)`` statistics, a batch ``(N, H, W)`` yields ``(N, L)``.
    """
    if n_passes < 1:
        raise ValueError(f"n_passes must be >= 1, got {n_passes}")
    x = np.asarray(inputs, dtype=np.float64)
    single = x.ndim == 2
    samples = np.stack([forward(model, x, train_mode=True, rng_seed=seed + i)[0]
                        for i in range(n_passes)])
    # where every pass agrees, report that value and an exact zero rather than
    # the rounding residue of averaging identical numbers
    agree = (samples == samples[0]).all(axis=0)
    mean = np.where(agree, samples[0], samples.mean(axis=0))
    std = np.where(agree, 0.0, samples.std(axis=0))
    if single:
        mean, std = mean[0], std[0]
    return McSummary(mean, std, n_passes, seed)


def summary_csv(summary: McSummary, names) -> str:
    """``label,mean,std`` rows for a single-image summary."""
    if summary.mean.ndim != 1:
        raise ValueError("summary_csv expects the statistics of one image")
    lines = ["label,mean,std"]
    lines += [f"{name},{m:.6f},{s:.6f}" for name, m, s in zip(names, summary.mean, summary.std)]
    return "\n".join(lines) + "\n"
