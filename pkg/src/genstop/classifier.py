"""The stop classifier: a linear softmax head over last-hidden-state vectors.

Two logit rows (continue, stop), no bias by default, trained with
cross-entropy under AdamW while the backbone that produced the features
stays frozen. At 2*d parameters the head is negligible next to any model it
gates (d=8192 gives 16384 parameters).

Training is deterministic: zero initialization, seeded shuffles, and a
fixed operation order make two runs with the same config bitwise equal.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

MAGIC = b"GGRD"
FORMAT_VERSION = 1

EPS_PROB = 1e-12
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


class SingleClassError(ValueError):
    """Training data contains only one of the two classes."""


class ModelFormatError(ValueError):
    """A model file is corrupt or has the wrong format."""


@dataclass
class TrainConfig:
    learning_rate: float = 5e-4
    epochs: int = 10
    batch_size: int = 64
    weight_decay: float = 0.01
    seed: int = 0
    validation_fraction: float = 0.1
    use_bias: bool = False
    class_weighted: bool = False

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not 0 < self.validation_fraction < 1:
            raise ValueError("validation_fraction must be in (0, 1)")

    def to_json(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "weight_decay": self.weight_decay,
            "seed": self.seed,
            "validation_fraction": self.validation_fraction,
            "use_bias": self.use_bias,
            "class_weighted": self.class_weighted,
        }


@dataclass
class StopClassifier:
    """Weights shape (2, d): row 0 continue logit, row 1 stop logit."""

    weights: np.ndarray
    feature_dim: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float32)
        if self.weights.shape != (2, self.columns):
            raise ValueError(
                f"weights shape {self.weights.shape} != (2, {self.columns})"
            )
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("weights contain non-finite entries")
        if self.feature_dim <= 0:
            raise ValueError("feature_dim must be positive")

    @property
    def use_bias(self) -> bool:
        return bool(self.metadata.get("use_bias", False))

    @property
    def columns(self) -> int:
        return self.feature_dim + (1 if self.use_bias else 0)

    @property
    def parameter_count(self) -> int:
        return 2 * self.columns


def _check_features(model: StopClassifier, features: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    if features.shape[-1] != model.feature_dim:
        raise ValueError(
            f"feature dim {features.shape[-1]} != model dim {model.feature_dim}"
        )
    if not np.all(np.isfinite(features)):
        raise ValueError("features contain non-finite values")
    if model.use_bias:
        ones = np.ones(features.shape[:-1] + (1,), dtype=np.float64)
        features = np.concatenate([features, ones], axis=-1)
    return features


def _softmax2(logits: np.ndarray) -> np.ndarray:
    """Row-wise 2-way softmax with max subtraction."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=-1, keepdims=True)


def stop_probabilities(model: StopClassifier, features: np.ndarray) -> np.ndarray:
    """p_stop for a batch of feature vectors, shape (n,)."""
    feats = _check_features(model, np.atleast_2d(features))
    logits = feats @ model.weights.astype(np.float64).T
    return _softmax2(logits)[:, 1]


def predict_stop_probability(
    model: StopClassifier, hidden: np.ndarray
) -> tuple[float, float]:
    """(p_continue, p_stop) for one hidden-state vector; sums to 1.

    Saturated softmax outputs are nudged off 0 and 1 so both probabilities
    stay in the open interval even for extreme logits.
    """
    hidden = np.asarray(hidden, dtype=np.float64)
    if hidden.ndim != 1:
        raise ValueError(f"expected a vector, got shape {hidden.shape}")
    p_stop = float(stop_probabilities(model, hidden[None, :])[0])
    p_stop = min(max(p_stop, 1e-15), 1.0 - 1e-15)
    return 1.0 - p_stop, p_stop


def _example_weights(labels: np.ndarray, class_weighted: bool) -> np.ndarray:
    if not class_weighted:
        return np.ones(len(labels), dtype=np.float64)
    n = len(labels)
    n_stop = int(labels.sum())
    counts = np.array([n - n_stop, n_stop], dtype=np.float64)
    per_class = n / (2.0 * np.maximum(counts, 1.0))
    return per_class[labels]


def loss(
    model: StopClassifier,
    features: np.ndarray,
    labels: np.ndarray,
    sample_weights: Optional[np.ndarray] = None,
) -> float:
    """Mean cross-entropy of p_stop against binary labels (1 = stop)."""
    labels = np.asarray(labels)
    if len(labels) == 0:
        raise ValueError("empty batch")
    p_stop = np.clip(stop_probabilities(model, features), EPS_PROB, 1.0 - EPS_PROB)
    per_example = -(labels * np.log(p_stop) + (1 - labels) * np.log(1.0 - p_stop))
    if sample_weights is not None:
        per_example = per_example * sample_weights
    return float(per_example.mean())


def loss_gradient(
    model: StopClassifier,
    features: np.ndarray,
    labels: np.ndarray,
    sample_weights: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Exact softmax cross-entropy gradient: mean of (p - onehot(y)) x feature."""
    labels = np.asarray(labels)
    if len(labels) == 0:
        raise ValueError("empty batch")
    feats = _check_features(model, np.atleast_2d(features))
    probs = _softmax2(feats @ model.weights.astype(np.float64).T)
    onehot = np.zeros_like(probs)
    onehot[np.arange(len(labels)), labels] = 1.0
    delta = probs - onehot
    if sample_weights is not None:
        delta = delta * sample_weights[:, None]
    return delta.T @ feats / len(labels)


def _accuracy(weights: np.ndarray, feats: np.ndarray, labels: np.ndarray) -> float:
    logits = feats @ weights.T
    return float((logits.argmax(axis=1) == labels).mean())


def train(dataset, config: TrainConfig = TrainConfig()) -> StopClassifier:
    """Train from zero initialization, returning the best-validation weights.

    ``dataset`` is a corpus.LabeledTokenDataset. The checkpoint with the
    highest validation accuracy across epoch boundaries wins; ties keep the
    earlier epoch.
    """
    if not dataset.has_both_classes():
        raise SingleClassError(
            f"dataset has {dataset.n_continue} continue / {dataset.n_stop} stop "
            "entries; both classes are required"
        )
    d = dataset.feature_dim
    features = dataset.features.astype(np.float64)
    labels = dataset.labels.astype(np.int64)
    if config.use_bias:
        features = np.concatenate(
            [features, np.ones((len(labels), 1), dtype=np.float64)], axis=1
        )
    columns = features.shape[1]

    rng = np.random.default_rng(config.seed)
    perm = rng.permutation(len(labels))
    n_val = min(max(1, int(round(len(labels) * config.validation_fraction))), len(labels) - 1)
    val_idx, train_idx = perm[:n_val], perm[n_val:]
    x_train, y_train = features[train_idx], labels[train_idx]
    x_val, y_val = features[val_idx], labels[val_idx]
    sample_w = _example_weights(labels, config.class_weighted)[train_idx]

    weights = np.zeros((2, columns), dtype=np.float64)
    m = np.zeros_like(weights)
    v = np.zeros_like(weights)
    t = 0
    best_acc = -1.0
    best_weights = weights.copy()
    best_epoch = -1

    for epoch in range(config.epochs):
        order = rng.permutation(len(y_train))
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            xb, yb = x_train[batch], y_train[batch]
            probs = _softmax2(xb @ weights.T)
            onehot = np.zeros_like(probs)
            onehot[np.arange(len(yb)), yb] = 1.0
            delta = (probs - onehot) * sample_w[batch][:, None]
            grad = delta.T @ xb / len(yb)
            t += 1
            m = ADAM_BETA1 * m + (1 - ADAM_BETA1) * grad
            v = ADAM_BETA2 * v + (1 - ADAM_BETA2) * grad * grad
            m_hat = m / (1 - ADAM_BETA1**t)
            v_hat = v / (1 - ADAM_BETA2**t)
            weights -= config.learning_rate * (
                m_hat / (np.sqrt(v_hat) + ADAM_EPS) + config.weight_decay * weights
            )
        acc = _accuracy(weights, x_val, y_val)
        if acc > best_acc:
            best_acc = acc
            best_weights = weights.copy()
            best_epoch = epoch

    return StopClassifier(
        weights=best_weights.astype(np.float32),
        feature_dim=d,
        metadata={
            "train_config": config.to_json(),
            "use_bias": config.use_bias,
            "best_epoch": best_epoch,
            "validation_accuracy": best_acc,
            "n_train": int(len(y_train)),
            "n_validation": int(len(y_val)),
        },
    )


def save_model(model: StopClassifier, path) -> None:
    meta = dict(model.metadata)
    meta["feature_dim"] = model.feature_dim
    meta_bytes = json.dumps(meta, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<I", model.columns))
        fh.write(np.ascontiguousarray(model.weights, dtype="<f4").tobytes())
        fh.write(struct.pack("<I", len(meta_bytes)))
        fh.write(meta_bytes)


def load_model(path) -> StopClassifier:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise ModelFormatError(f"bad magic {blob[:4]!r}, expected {MAGIC!r}")
    if len(blob) < 12:
        raise ModelFormatError("file truncated before header")
    version, columns = struct.unpack("<II", blob[4:12])
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format version {version}")
    weight_bytes = 2 * columns * 4
    if len(blob) < 12 + weight_bytes + 4:
        raise ModelFormatError("file truncated inside weight block")
    weights = np.frombuffer(blob[12 : 12 + weight_bytes], dtype="<f4").reshape(2, columns)
    (meta_len,) = struct.unpack("<I", blob[12 + weight_bytes : 16 + weight_bytes])
    meta_start = 16 + weight_bytes
    if len(blob) != meta_start + meta_len:
        raise ModelFormatError(
            f"metadata length {meta_len} does not match file size"
        )
    try:
        meta = json.loads(blob[meta_start:].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"metadata trailer is not valid JSON: {exc}") from exc
    use_bias = bool(meta.get("use_bias", False))
    feature_dim = columns - 1 if use_bias else columns
    if meta.get("feature_dim") is not None and meta["feature_dim"] != feature_dim:
        raise ModelFormatError(
            f"metadata feature_dim {meta['feature_dim']} conflicts with weight "
            f"columns {columns}"
        )
    return StopClassifier(
        weights=weights.copy(), feature_dim=feature_dim, metadata=meta
    )
