"""Synthetic hierarchical multi-label image data and training augmentations.

Labels are sampled top-down through a taxonomy: roots are Bernoulli with a
configurable marginal, and every child is switched on with
``P(child=1 | parent=1)`` or ``P(child=1 | parent=0)`` depending on its
parents (the largest applicable probability wins for multi-parent
children). A label named ``Uncertain`` without parents is not sampled but
derived from the observation labels.

Images are dark noisy backgrounds on which every positive label stamps its
own glyph, a fixed binary texture scaled by ``signal``, into its own grid
cell. Cells are laid out
row-major in label order on a ``ceil(sqrt(L))``-wide grid, so label ``i``
occupies cell ``(i // g, i % g)``; see :func:`patch_boxes`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import pnm
from .taxonomy import UNCERTAIN, Taxonomy, derive_uncertain

SPLITS = ("train", "val", "test")
GLYPH_SEED = 20240611


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    taxonomy: Taxonomy
    n_samples: int = 2600
    height: int = 24
    width: int = 24
    patch_size: int = 4
    root_prob: float | dict = 0.5
    p_child_given_parent: float | dict = 0.5
    p_child_given_no_parent: float | dict = 0.0
    signal: float = 0.8
    noise_std: float = 0.02
    background: float = 0.05
    split_fractions: tuple = (2000 / 2600, 200 / 2600, 400 / 2600)
    seed: int = 42

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples ≥ 1 required")
        for name in ("root_prob", "p_child_given_parent", "p_child_given_no_parent"):
            value = getattr(self, name)
            values = value.values() if isinstance(value, dict) else [value]
            if any(not 0.0 <= v <= 1.0 for v in values):
                raise ValueError(f"{name}: probabilities must lie in [0, 1]")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        if len(self.split_fractions) != 3 or min(self.split_fractions) < 0:
            raise ValueError("split_fractions must be three non-negative numbers")


@dataclass
class Dataset:
    images: np.ndarray  # (N, H, W) float64 in [0, 1]
    labels: np.ndarray  # (N, L) int8
    label_names: list
    split: np.ndarray  # (N,) str tags
    filenames: list = field(default_factory=list)

    def __post_init__(self):
        if not self.filenames:
            self.filenames = [f"{i:05d}.pgm" for i in range(len(self.images))]
        if not (len(self.images) == len(self.labels) == len(self.split) == len(self.filenames)):
            raise DatasetError("images, labels, split tags and filenames must align")

    def __len__(self):
        return len(self.images)

    def subset(self, tag: str) -> "Dataset":
        idx = np.flatnonzero(self.split == tag)
        return Dataset(self.images[idx], self.labels[idx], list(self.label_names),
                       self.split[idx], [self.filenames[i] for i in idx])


def _per_edge(value, t: Taxonomy):
    if isinstance(value, dict):
        out = {}
        for (p, c) in t.edges:
            key = (t.labels[p].name, t.labels[c].name)
            out[(p, c)] = value.get(key, value.get((p, c), 0.0))
        return out
    return {edge: float(value) for edge in t.edges}


def _per_root(value, t: Taxonomy, i: int) -> float:
    if isinstance(value, dict):
        return float(value.get(t.labels[i].name, value.get(i, 0.0)))
    return float(value)


def sample_labels(cfg: GenConfig, rng: np.random.Generator) -> np.ndarray:
    t = cfg.taxonomy
    n = cfg.n_samples
    p_on = _per_edge(cfg.p_child_given_parent, t)
    p_off = _per_edge(cfg.p_child_given_no_parent, t)
    Y = np.zeros((n, len(t)), dtype=np.int8)
    derived = None
    for i in t.topological_order():
        parents = t.parents(i)
        if not parents and t.labels[i].name == UNCERTAIN:
            derived = i
            continue
        if not parents:
            prob = np.full(n, _per_root(cfg.root_prob, t, i))
        else:
            prob = np.zeros(n)
            for p in parents:
                edge_prob = np.where(Y[:, p] == 1, p_on[(p, i)], p_off[(p, i)])
                prob = np.maximum(prob, edge_prob)
        Y[:, i] = rng.random(n) < prob
    if derived is not None:
        orig = t.original_labels()
        Y[:, derived] = derive_uncertain(Y[:, orig], n_original=len(orig))
    return Y


def grid_size(n_labels: int) -> int:
    return math.ceil(math.sqrt(n_labels))


def patch_boxes(n_labels: int, height: int, width: int, patch_size: int):
    """Per-label ``(row0, col0, row1, col1)`` patch boxes (half-open), centred in grid cells."""
    g = grid_size(n_labels)
    cell_h, cell_w = height // g, width // g
    if patch_size < 1 or patch_size > min(cell_h, cell_w):
        raise DatasetError(
            f"image {height}x{width} too small for {n_labels} patches of size {patch_size}")
    boxes = []
    for i in range(n_labels):
        r, c = divmod(i, g)
        r0 = r * cell_h + (cell_h - patch_size) // 2
        c0 = c * cell_w + (cell_w - patch_size) // 2
        boxes.append((r0, c0, r0 + patch_size, c0 + patch_size))
    return boxes


def glyphs(n_labels: int, patch_size: int) -> np.ndarray:
    """Fixed binary patterns, one per label, independent of the dataset seed.

    Exactly half of each glyph's pixels (rounded down) are lit, so every
    label adds the same total brightness and the glyphs differ only in
    texture. Global pooling discards position, so texture is what tells
    the labels apart.
    """
    rng = np.random.default_rng([GLYPH_SEED, patch_size])
    area = patch_size * patch_size
    out = []
    seen = set()
    while len(out) < n_labels:
        flat = np.zeros(area)
        flat[rng.permutation(area)[:area // 2]] = 1.0
        key = flat.tobytes()
        if key in seen and len(seen) < math.comb(area, area // 2):
            continue
        seen.add(key)
        out.append(flat.reshape(patch_size, patch_size))
    return np.stack(out)


def render_images(labels: np.ndarray, cfg: GenConfig, rng: np.random.Generator) -> np.ndarray:
    n, n_labels = labels.shape
    boxes = patch_boxes(n_labels, cfg.height, cfg.width, cfg.patch_size)
    pattern = glyphs(n_labels, cfg.patch_size)
    images = cfg.background + cfg.noise_std * rng.standard_normal((n, cfg.height, cfg.width))
    for j, (r0, c0, r1, c1) in enumerate(boxes):
        on = labels[:, j].astype(bool)
        images[on, r0:r1, c0:c1] += cfg.signal * pattern[j]
    return np.clip(images, 0.0, 1.0)


def assign_splits(n: int, fractions, rng: np.random.Generator) -> np.ndarray:
    fractions = np.asarray(fractions, dtype=np.float64)
    fractions = fractions / fractions.sum()
    counts = np.floor(fractions * n).astype(int)
    counts[0] += n - counts.sum()
    tags = np.repeat(np.array(SPLITS), counts)
    return tags[rng.permutation(n)]


def generate(cfg: GenConfig) -> Dataset:
    n_labels = len(cfg.taxonomy)
    patch_boxes(n_labels, cfg.height, cfg.width, cfg.patch_size)
    label_rng, image_rng, split_rng = (np.random.default_rng(s)
                                       for s in np.random.SeedSequence(cfg.seed).spawn(3))
    labels = sample_labels(cfg, label_rng)
    images = render_images(labels, cfg, image_rng)
    split = assign_splits(cfg.n_samples, cfg.split_fractions, split_rng)
    return Dataset(images, labels, cfg.taxonomy.names, split)


# -- augmentation ---------------------------------------------------------

@dataclass(frozen=True)
class AugmentConfig:
    hflip: bool = True
    vflip: bool = True
    brightness_delta: float = 0.1
    contrast_range: tuple = (0.9, 1.1)
    flip_prob: float = 0.5

    def __post_init__(self):
        if not 0 <= self.brightness_delta < 1:
            raise ValueError("brightness_delta must lie in [0, 1)")
        lo, hi = self.contrast_range
        if not 0 < lo <= hi:
            raise ValueError("contrast_range must satisfy 0 < lo <= hi")


def hflip(image):
    return np.asarray(image)[..., ::-1]


def vflip(image):
    return np.asarray(image)[..., ::-1, :]


def adjust_brightness(image, delta: float):
    return np.asarray(image) + delta


def adjust_contrast(image, factor: float):
    image = np.asarray(image)
    mean = image.mean(axis=(-2, -1), keepdims=True)
    return (image - mean) * factor + mean


def augment(image, cfg: AugmentConfig, rng: np.random.Generator):
    """Randomly flip, shift brightness and scale contrast about the mean; clamp to [0, 1]."""
    out = np.asarray(image, dtype=np.float64)
    if cfg.hflip and rng.random() < cfg.flip_prob:
        out = hflip(out)
    if cfg.vflip and rng.random() < cfg.flip_prob:
        out = vflip(out)
    if cfg.brightness_delta > 0:
        out = adjust_brightness(out, rng.uniform(-cfg.brightness_delta, cfg.brightness_delta))
    lo, hi = cfg.contrast_range
    if (lo, hi) != (1.0, 1.0):
        out = adjust_contrast(out, rng.uniform(lo, hi))
    return np.clip(out, 0.0, 1.0)


def augment_batch(images, cfg: AugmentConfig, rng: np.random.Generator):
    return np.stack([augment(img, cfg, rng) for img in images])


# -- persistence ----------------------------------------------------------

MAXVAL = 65535


def save_dataset(d: Dataset, directory):
    """Write ``labels.csv``, ``split.csv`` and 16-bit ``images/NNNNN.pgm``."""
    root = Path(directory)
    (root / "images").mkdir(parents=True, exist_ok=True)
    for name, img in zip(d.filenames, d.images):
        pnm.write_pgm(root / "images" / name, np.rint(img * MAXVAL).astype(np.int64), MAXVAL)
    with open(root / "labels.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["image", *d.label_names])
        for name, row in zip(d.filenames, d.labels):
            w.writerow([name, *(int(v) for v in row)])
    with open(root / "split.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["image", "split"])
        for name, tag in zip(d.filenames, d.split):
            w.writerow([name, tag])


def read_labels_csv(path, taxonomy: Taxonomy | None = None):
    """Return ``(filenames, label_names, labels)`` from a ``labels.csv`` file."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"missing {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:1] != ["image"]:
        raise DatasetError(f"{path}: header must start with 'image'")
    names = rows[0][1:]
    if taxonomy is not None and names != taxonomy.names:
        raise DatasetError(
            f"{path}: {len(names)} label columns do not match the {len(taxonomy)} taxonomy labels")
    files, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(names) + 1:
            raise DatasetError(f"{path}:{lineno}: expected {len(names) + 1} columns, got {len(row)}")
        files.append(row[0])
        try:
            values.append([int(v) for v in row[1:]])
        except ValueError:
            raise DatasetError(f"{path}:{lineno}: non-integer label") from None
    labels = np.array(values, dtype=np.int8).reshape(len(values), len(names))
    if not np.isin(labels, (0, 1)).all():
        raise DatasetError(f"{path}: labels must be 0 or 1")
    return files, names, labels


def load_dataset(directory, taxonomy: Taxonomy | None = None) -> Dataset:
    root = Path(directory)
    files, names, labels = read_labels_csv(root / "labels.csv", taxonomy)
    split_path = root / "split.csv"
    if not split_path.exists():
        raise DatasetError(f"missing {split_path}")
    with open(split_path, newline="") as fh:
        split_rows = list(csv.reader(fh))[1:]
    tags = dict((r[0], r[1]) for r in split_rows if len(r) == 2)
    missing = [f for f in files if f not in tags]
    if missing:
        raise DatasetError(f"split.csv has no entry for {missing[0]}")
    images = []
    for name in files:
        path = root / "images" / name
        if not path.exists():
            raise DatasetError(f"missing image {path}")
        pixels, maxval = pnm.read_pnm(path)
        if pixels.ndim != 2:
            raise DatasetError(f"{path}: expected grayscale PGM")
        images.append(pixels / maxval)
    shapes = {img.shape for img in images}
    if len(shapes) > 1:
        raise DatasetError("images have inconsistent sizes")
    return Dataset(np.stack(images) if images else np.zeros((0, 0, 0)), labels, names,
                   np.array([tags[f] for f in files]), files)
