"""
The hierarchical loss on a two-label toy
========================================

One parent, one child. BCE alone does not care whether the child outranks
its parent; the penalty term does.
"""

import numpy as np

from hbce.loss import LossConfig, hbce, hbce_grad
from hbce.penalty import fixed_penalties
from hbce.taxonomy import Taxonomy

t = Taxonomy.from_names(["Fluid", "Effusion"], [("Fluid", "Effusion")])
table = fixed_penalties(t, beta=1.0)
truth = np.array([[1.0, 1.0]])

# Parent predicted below the threshold, child above: an inconsistent pair.
inconsistent = np.array([[0.4, 0.8]])
consistent = np.array([[0.8, 0.4]])

hard = LossConfig(lam=0.5, mode="hard")
for name, pred in (("inconsistent", inconsistent), ("consistent", consistent)):
    v = hbce(truth, pred, table, hard)
    print(f"{name:>12}: bce {v.bce:.4f}  penalty {v.penalty_sum:.1f}  total {v.total:.4f}")

# The hard indicator has zero gradient almost everywhere. The soft variant
# replaces each step by a sigmoid of width tau, so training can feel it.
for tau in (0.2, 0.05, 0.01):
    soft = LossConfig(lam=0.5, mode="soft", tau=tau)
    v = hbce(truth, inconsistent, table, soft)
    g = hbce_grad(truth, inconsistent, table, soft)
    print(f"tau {tau:<5} penalty {v.penalty_sum:.4f}  dL/dparent {g[0, 0]:+.3f}  "
          f"dL/dchild {g[0, 1]:+.3f}")

# As tau shrinks the soft penalty approaches the hard count of 1.
