"""
Taxonomy, synthetic labels and penalty tables
=============================================

Load the shipped label hierarchy, sample a labelled dataset from it and
turn the training labels into per-edge penalty weights.
"""

import numpy as np

from hbce import synthdata as sd
from hbce.penalty import estimate_data_driven, fixed_penalties
from hbce.taxonomy import default_taxonomy, validate

# The default hierarchy: 21 labels, parents are broad categories.
t = default_taxonomy()
print(len(t), "labels,", len(t.edges), "edges")
for p, c in t.edges[:5]:
    print(f"  {t.names[p]} > {t.names[c]}")

report = validate(t)
print("valid:", report.ok, "| warnings:", len(report.warnings))

# Sample labels top-down. A child fires with p_child_given_parent when its
# parent is on, and with p_child_given_no_parent when it is off. That second
# number is the label noise the penalty is meant to discourage.
cfg = sd.GenConfig(t, n_samples=4000, p_child_given_no_parent=0.2, seed=0)
data = sd.generate(cfg)
train = data.subset("train")
print("train images:", train.images.shape, "positives per label:", train.labels.sum(0)[:6], "...")

# Fixed table: the same beta on every edge.
fixed = fixed_penalties(t, beta=1.0)

# Data-driven table: smoothed P(child=1 | parent=0) from training labels.
# With injected noise at 0.2 every edge should come out near 0.2.
learned = estimate_data_driven(train.labels, t, epsilon=1.0)
weights = np.array(list(learned.entries.values()))
print(f"data-driven weights: min {weights.min():.3f} max {weights.max():.3f}")
print(learned.to_csv(t).splitlines()[:4])
