"""Mini-batch training with Adam, reduce-on-plateau, early stopping and checkpointing."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..loss import LossConfig, hbce, hbce_grad
from ..metrics import auroc_per_label, mean_auroc
from ..penalty import PenaltyTable
from ..synthdata import AugmentConfig, augment_batch
from .checkpoint import save_checkpoint
from .model import Classifier, ModelConfig, backward, forward, init_model, predict
from .optim import AdamState, adam_step

log = logging.getLogger(__name__)


class TrainingDivergedError(RuntimeError):
    def __init__(self, epoch: int):
        self.epoch = epoch
        super().__init__(f"loss became NaN/inf in epoch {epoch}")


@dataclass(frozen=True)
class TrainConfig:
    lr_init: float = 1e-4
    plateau_factor: float = 0.9
    plateau_patience: int = 1
    early_stop_patience: int = 3
    batch_size: int = 16
    max_epochs: int = 30
    seed: int = 42
    loss: LossConfig = field(default_factory=LossConfig)
    augment: AugmentConfig | None = None

    def __post_init__(self):
        if not 0 < self.plateau_factor < 1:
            raise ValueError("plateau_factor must lie in (0, 1)")
        if self.early_stop_patience < 1 or self.plateau_patience < 1:
            raise ValueError("patience values must be >= 1")
        if self.batch_size < 1 or self.max_epochs < 0:
            raise ValueError("batch_size >= 1 and max_epochs >= 0 required")
        if not self.lr_init > 0:
            raise ValueError("lr_init must be positive")


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    val_mean_auroc: float
    lr: float
    saved: bool = False


@dataclass
class History:
    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    @property
    def saved_epochs(self) -> list:
        return [r.epoch for r in self.records if r.saved]

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.records]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epoch", "train_loss", "val_loss", "val_mean_auroc", "lr"])
        for r in self.records:
            w.writerow([r.epoch, repr(r.train_loss), repr(r.val_loss), repr(r.val_mean_auroc), repr(r.lr)])
        return buf.getvalue()


@dataclass
class Decision:
    save: bool
    stop: bool
    next_lr: float


class EpochPolicy:
    """Per-epoch bookkeeping for the learning-rate schedule, checkpoints and stopping.

    A checkpoint is taken when validation loss decreases or mean AUROC
    increases. The rate is multiplied by ``factor`` after ``plateau_patience``
    epochs without a loss decrease, and training stops after
    ``early_stop_patience`` such epochs in a row.
    """

    def __init__(self, lr_init=1e-4, factor=0.9, plateau_patience=1, early_stop_patience=3):
        self.lr = lr_init
        self.factor = factor
        self.plateau_patience = plateau_patience
        self.early_stop_patience = early_stop_patience
        self.best_loss = math.inf
        self.best_auroc = -math.inf
        self.stale_epochs = 0
        self.plateau_epochs = 0
        self.reductions = 0

    @classmethod
    def from_config(cls, cfg: TrainConfig) -> "EpochPolicy":
        return cls(cfg.lr_init, cfg.plateau_factor, cfg.plateau_patience, cfg.early_stop_patience)

    def update(self, val_loss: float, val_auroc: float) -> Decision:
        loss_improved = val_loss < self.best_loss
        auroc_improved = not math.isnan(val_auroc) and val_auroc > self.best_auroc
        if loss_improved:
            self.best_loss = val_loss
            self.stale_epochs = 0
            self.plateau_epochs = 0
        else:
            self.stale_epochs += 1
            self.plateau_epochs += 1
            if self.plateau_epochs >= self.plateau_patience:
                self.lr *= self.factor
                self.reductions += 1
                self.plateau_epochs = 0
        if auroc_improved:
            self.best_auroc = val_auroc
        stop = self.stale_epochs >= self.early_stop_patience
        return Decision(loss_improved or auroc_improved, stop, self.lr)


def evaluate(model: Classifier, images, labels, table: PenaltyTable | None, loss_cfg: LossConfig):
    """Validation loss (full split as one batch) and mean AUROC over defined labels."""
    pred = predict(model, images)
    value = hbce(labels, pred, table, loss_cfg)
    per_label = auroc_per_label(labels, pred)
    try:
        mean = mean_auroc(per_label)
    except ValueError:
        mean = math.nan
    return value.total, mean


def train(model_cfg: ModelConfig, train_set, val_set, train_cfg: TrainConfig,
          taxonomy=None, penalty_table: PenaltyTable | None = None, *,
          model: Classifier | None = None,
          validate: Callable | None = None,
          checkpoint_path=None):
    """Train the classifier and return ``(best_model, history)``.

    ``train_set`` and ``val_set`` are ``(images, labels)`` pairs or objects
    with ``images`` / ``labels`` attributes. ``validate(model, epoch)`` may
    replace the built-in validation and must return ``(val_loss, val_mean_auroc)``.
    When ``checkpoint_path`` is given every saved model is written there and
    the file finally holds the returned model.
    The returned model is the checkpoint with the lowest validation loss.
    """
    x_train, y_train = _unpack(train_set)
    x_val, y_val = _unpack(val_set)
    if len(x_train) == 0 or len(x_val) == 0:
        raise ValueError("training and validation sets must be non-empty")
    if y_train.shape[1] != model_cfg.output_labels or y_val.shape[1] != model_cfg.output_labels:
        raise ValueError("label dimension does not match model output_labels")
    if taxonomy is not None and len(taxonomy) != model_cfg.output_labels:
        raise ValueError("taxonomy size does not match model output_labels")

    seeds = np.random.SeedSequence(train_cfg.seed).spawn(4)
    if model is None:
        model = init_model(model_cfg, int(seeds[0].generate_state(1)[0]))
    else:
        model = model.copy()
    history = History()
    if train_cfg.max_epochs == 0:
        return model, history

    order = np.random.default_rng(seeds[1]).permutation(len(x_train))
    dropout_rng = np.random.default_rng(seeds[2])
    augment_rng = np.random.default_rng(seeds[3])
    state = AdamState.zeros_like(model.params)
    policy = EpochPolicy.from_config(train_cfg)
    loss_cfg = train_cfg.loss
    best_model, best_loss = model.copy(), math.inf
    bs = train_cfg.batch_size

    for epoch in range(1, train_cfg.max_epochs + 1):
        lr = policy.lr
        total, seen = 0.0, 0
        for start in range(0, len(order), bs):
            idx = order[start:start + bs]
            xb, yb = x_train[idx], y_train[idx]
            if train_cfg.augment is not None:
                xb = augment_batch(xb, train_cfg.augment, augment_rng)
            pred, cache = forward(model, xb, train_mode=True, rng_seed=dropout_rng)
            value = hbce(yb, pred, penalty_table, loss_cfg)
            if not math.isfinite(value.total):
                raise TrainingDivergedError(epoch)
            grads = backward(model, cache, hbce_grad(yb, pred, penalty_table, loss_cfg))
            new_params, state = adam_step(model.params, grads, state, lr)
            model.set_params(new_params)
            total += value.total * len(idx)
            seen += len(idx)
        train_loss = total / seen

        if validate is None:
            val_loss, val_auc = evaluate(model, x_val, y_val, penalty_table, loss_cfg)
        else:
            val_loss, val_auc = validate(model, epoch)
        if not math.isfinite(val_loss):
            raise TrainingDivergedError(epoch)
        decision = policy.update(val_loss, val_auc)
        history.records.append(EpochRecord(epoch, train_loss, val_loss, val_auc, lr, decision.save))
        log.info("epoch %d train %.5f val %.5f auroc %.4f lr %.3g%s", epoch, train_loss,
                 val_loss, val_auc, lr, " *" if decision.save else "")
        if decision.save and val_loss < best_loss:
            best_model, best_loss = model.copy(), val_loss
        if decision.save and checkpoint_path is not None:
            save_checkpoint(model, checkpoint_path)
        if decision.stop:
            break

    if checkpoint_path is not None:
        save_checkpoint(best_model, checkpoint_path)
    return best_model, history


def _unpack(data):
    if hasattr(data, "images"):
        x, y = data.images, data.labels
    else:
        x, y = data
    return np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
