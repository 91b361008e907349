"""
Uncertainty and heatmaps for a single image
===========================================

Train briefly, then ask two questions about one test image: how stable is
each prediction under dropout, and where did the model look.
Writes ``cam_demo.pgm`` and ``cam_demo_side.pgm`` to the current directory.
"""

import numpy as np

from hbce import explain
from hbce import synthdata as sd
from hbce.engine import ModelConfig, TrainConfig, train
from hbce.taxonomy import default_taxonomy
from hbce.uncertainty import mc_predict

t = default_taxonomy()
data = sd.generate(sd.GenConfig(t, seed=42))
model, _ = train(ModelConfig(24, 24, len(t)), data.subset("train"), data.subset("val"),
                 TrainConfig(max_epochs=10), t)

test = data.subset("test")
image, labels = test.images[0], test.labels[0]

# Ten stochastic passes with dropout left on; std is the spread across passes.
summary = mc_predict(model, image, n_passes=10, seed=0)
order = np.argsort(-summary.std)[:5]
print("most uncertain labels:")
for j in order:
    print(f"  {t.names[j]:<28} mean {summary.mean[j]:.3f}  std {summary.std[j]:.3f}  "
          f"truth {int(labels[j])}")

# Grad-CAM for the first positive label, clipped at half the peak.
label = int(np.flatnonzero(labels)[0])
heat = explain.normalize_clip(explain.grad_cam(model, image, label))
row, col = explain.peak_cell(heat)
print(f"CAM for {t.names[label]} peaks at ({row}, {col}); "
      f"its patch box is {sd.patch_boxes(len(t), 24, 24, 4)[label]}")
paths = explain.export_heatmap(heat, image, "cam_demo.pgm")
print("wrote", ", ".join(str(p) for p in paths))
