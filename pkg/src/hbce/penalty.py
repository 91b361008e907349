"""Per-edge penalty tables: constant (fixed) or estimated from training labels."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .taxonomy import Taxonomy

DEFAULT_EPSILON = 1.0


@dataclass(frozen=True)
class PenaltyTable:
    """Mapping ``(parent_index, child_index) -> penalty`` over a taxonomy's edges.

    ``strategy`` is ``"fixed"`` or ``"data-driven"``; ``param`` holds beta
    or epsilon respectively.
    """

    entries: dict
    strategy: str
    param: float

    def __post_init__(self):
        for key, value in self.entries.items():
            if value < 0:
                raise ValueError(f"negative penalty {value} on edge {key}")

    def __len__(self):
        return len(self.entries)

    def arrays(self):
        """Edge endpoints and penalties as aligned arrays, in insertion order."""
        if not self.entries:
            empty = np.zeros(0, dtype=np.intp)
            return empty, empty.copy(), np.zeros(0)
        keys = list(self.entries)
        parents = np.array([p for p, _ in keys], dtype=np.intp)
        children = np.array([c for _, c in keys], dtype=np.intp)
        values = np.array([self.entries[k] for k in keys], dtype=np.float64)
        return parents, children, values

    def to_csv(self, taxonomy: Taxonomy) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["parent", "child", "penalty"])
        for (p, c), value in self.entries.items():
            writer.writerow([taxonomy.labels[p].name, taxonomy.labels[c].name, f"{value:.6f}"])
        return buf.getvalue()


def fixed_penalties(t: Taxonomy, beta: float = 1.0) -> PenaltyTable:
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    return PenaltyTable({edge: float(beta) for edge in t.edges}, "fixed", float(beta))


def estimate_data_driven(labels, t: Taxonomy, epsilon: float = DEFAULT_EPSILON) -> PenaltyTable:
    """Laplace-smoothed P(child = 1 | parent = 0) for every edge.

    Parameters
    ----------
    labels : array_like, shape (N, L)
        Binary training labels, columns in taxonomy order.
    epsilon : float
        Smoothing pseudo-count, must be positive.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    m = np.asarray(labels)
    if m.ndim != 2 or m.shape[1] != len(t):
        raise ValueError(f"label matrix shape {m.shape} does not match {len(t)} taxonomy labels")
    entries = {}
    for p, c in t.edges:
        parent_off = m[:, p] == 0
        n_parent_off = int(parent_off.sum())
        n_violation = int((parent_off & (m[:, c] == 1)).sum())
        entries[(p, c)] = (n_violation + epsilon) / (n_parent_off + 2 * epsilon)
    return PenaltyTable(entries, "data-driven", float(epsilon))
