from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .model import (
    Classifier,
    ModelConfig,
    ShapeMismatchError,
    StaleCacheError,
    backward,
    forward,
    init_model,
    predict,
    zero_model,
)
from .optim import AdamState, ConsumedStateError, adam_step
from .training import (
    EpochPolicy,
    History,
    TrainConfig,
    TrainingDivergedError,
    evaluate,
    train,
)

__all__ = [
    "AdamState",
    "CheckpointError",
    "Classifier",
    "ConsumedStateError",
    "EpochPolicy",
    "History",
    "ModelConfig",
    "ShapeMismatchError",
    "StaleCacheError",
    "TrainConfig",
    "TrainingDivergedError",
    "adam_step",
    "backward",
    "evaluate",
    "forward",
    "init_model",
    "load_checkpoint",
    "predict",
    "save_checkpoint",
    "train",
    "zero_model",
]
