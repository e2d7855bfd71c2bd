"""Batched gradient training of FCM classifiers."""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, replace
from typing import List, Mapping, Optional, Tuple

import numpy as np

from .exceptions import ConfigError, DataError, NumericalError
from .gradients import LossKind, _backprop, loss
from .model import FcmModel, UNDECIDED, Variant, run_states

log = logging.getLogger(__name__)

FULL_BATCH = -1

#: Config file keys, in canonical order.
CONFIG_KEYS = ("classifier", "d", "lambda", "epochs", "bs", "optimizer", "lr")


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of one training run.

    ``batch_size`` of -1 (``FULL_BATCH``) processes the whole dataset as a
    single batch.
    """

    variant: Variant = Variant.FCMMC
    depth: int = 3
    lam: float = 1.0
    epochs: int = 1000
    batch_size: int = FULL_BATCH
    optimizer: str = "rmsprop"
    learning_rate: float = 0.001
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        object.__setattr__(self, "optimizer", str(self.optimizer).lower())
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not (self.batch_size == FULL_BATCH or self.batch_size >= 1):
            raise ValueError(f"bs must be >= 1 or -1 (full batch), got {self.batch_size}")
        if not self.learning_rate > 0:
            raise ValueError(f"lr must be positive, got {self.learning_rate}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"unknown optimizer {self.optimizer!r}; expected one of {sorted(OPTIMIZERS)}")

    @classmethod
    def from_mapping(cls, values: Mapping[str, str], seed: int = 0) -> "TrainConfig":
        """Build a config from table-style keys (``classifier, d, lambda, epochs, bs, optimizer, lr``).

        Raises ``ConfigError`` naming the first unknown or missing key.
        """
        for key in values:
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}; allowed keys: {', '.join(CONFIG_KEYS)}")
        missing = [k for k in CONFIG_KEYS if k not in values]
        if missing:
            raise ConfigError(f"missing config key {missing[0]!r}")
        try:
            return cls(
                variant=Variant.parse(values["classifier"]),
                depth=int(values["d"]),
                lam=float(values["lambda"]),
                epochs=int(values["epochs"]),
                batch_size=int(values["bs"]),
                optimizer=str(values["optimizer"]),
                learning_rate=float(values["lr"]),
                seed=seed,
            )
        except ValueError as exc:
            raise ConfigError(f"invalid config value: {exc}") from None

    def to_mapping(self) -> dict:
        return {
            "classifier": self.variant.value,
            "d": self.depth,
            "lambda": self.lam,
            "epochs": self.epochs,
            "bs": self.batch_size,
            "optimizer": self.optimizer,
            "lr": self.learning_rate,
        }


class SGD:
    def __init__(self, lr: float):
        self.lr = lr
        self.t = 0

    def step(self, params, grads):
        self.t += 1
        return [p - self.lr * g for p, g in zip(params, grads)]


class RMSProp:
    def __init__(self, lr: float, rho: float = 0.9, eps: float = 1e-8):
        self.lr = lr
        self.rho = rho
        self.eps = eps
        self.v = None
        self.t = 0

    def step(self, params, grads):
        if self.v is None:
            self.v = [np.zeros_like(p) for p in params]
        self.t += 1
        out = []
        for i, (p, g) in enumerate(zip(params, grads)):
            self.v[i] = self.rho * self.v[i] + (1 - self.rho) * g * g
            out.append(p - self.lr * g / (np.sqrt(self.v[i]) + self.eps))
        return out


class Adam:
    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = None
        self.v = None
        self.t = 0

    def step(self, params, grads):
        if self.m is None:
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]
        self.t += 1
        c1 = 1 - self.beta1 ** self.t
        c2 = 1 - self.beta2 ** self.t
        out = []
        for i, (p, g) in enumerate(zip(params, grads)):
            self.m[i] = self.beta1 * self.m[i] + (1 - self.beta1) * g
            self.v[i] = self.beta2 * self.v[i] + (1 - self.beta2) * g * g
            out.append(p - self.lr * (self.m[i] / c1) / (np.sqrt(self.v[i] / c2) + self.eps))
        return out


OPTIMIZERS = {"sgd": SGD, "rmsprop": RMSProp, "adam": Adam}


def make_optimizer(name: str, lr: float):
    try:
        return OPTIMIZERS[name.lower()](lr)
    except KeyError:
        raise ValueError(f"unknown optimizer {name!r}") from None


def init_weights(n: int, k: int, variant, seed) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform ``[-0.5, 0.5]`` weights and bias; ``seed`` may be an int or a Generator."""
    if n < 1 or k < 2:
        raise ValueError(f"need n >= 1 and k >= 2, got n={n}, k={k}")
    variant = Variant.parse(variant)
    r = n + (1 if variant is Variant.FCMB else k)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    W = rng.uniform(-0.5, 0.5, size=(r, r))
    b = rng.uniform(-0.5, 0.5, size=r)
    return W, b


def make_batches(m: int, bs: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Split ``range(m)`` into ``m // bs`` shuffled batches, dropping the remainder."""
    if bs is None or bs == FULL_BATCH:
        return [np.arange(m)]
    if bs < 1:
        raise ValueError(f"batch size must be >= 1, got {bs}")
    if bs > m:
        raise ValueError(f"batch size {bs} exceeds dataset size {m}")
    perm = rng.permutation(m)
    return [perm[i * bs:(i + 1) * bs] for i in range(m // bs)]


def fit(dataset, cfg: TrainConfig, *, initial: Optional[Tuple[np.ndarray, np.ndarray]] = None):
    """Train an FCM classifier on a scaled ``LabeledDataset``.

    Returns ``(model, loss_history)`` where the history holds the loss of
    every batch before its update. There is no early stopping.
    """
    X = np.asarray(dataset.X, dtype=np.float64)
    y = np.asarray(dataset.y, dtype=np.int64)
    m, n = X.shape
    k = len(dataset.label_names)
    if k < 2:
        raise DataError("training needs at least two classes")
    variant = cfg.variant
    if variant is Variant.FCMB and k > 2:
        warnings.warn(f"FCMB requested for {k} classes; training FCMMC instead", stacklevel=2)
        variant = Variant.FCMMC
    kind = LossKind.for_variant(variant)

    rng = np.random.default_rng(cfg.seed)
    if initial is None:
        W, b = init_weights(n, k, variant, rng)
    else:
        W, b = (np.array(p, dtype=np.float64) for p in initial)
    n_out = 1 if variant is Variant.FCMB else k
    # concept-major state with the undecided output rows appended
    A0_all = np.vstack([X.T, np.full((n_out, m), UNDECIDED)])
    opt = make_optimizer(cfg.optimizer, cfg.learning_rate)
    lam, d = cfg.lam, cfg.depth

    history = []
    for epoch in range(cfg.epochs):
        for s, idx in enumerate(make_batches(m, cfg.batch_size, rng)):
            A0 = A0_all[:, idx]
            yb = y[idx]
            states = run_states(A0, W, b, lam, d)
            batch_loss = loss(states[-1][n:], yb, kind)
            if not np.isfinite(batch_loss):
                raise NumericalError(f"non-finite loss at epoch {epoch}, batch {s}")
            history.append(batch_loss)
            dW, db = _backprop(states, yb, kind, W, lam, n)
            if not (np.all(np.isfinite(dW)) and np.all(np.isfinite(db))):
                raise NumericalError(f"non-finite gradient at epoch {epoch}, batch {s}")
            W, b = opt.step([W, b], [dW, db])
        if log.isEnabledFor(logging.DEBUG) and (epoch + 1) % 100 == 0:
            log.debug("epoch %d loss %.6f", epoch + 1, history[-1])

    model = FcmModel(variant=variant, n=n, k=k, W=W, b=b, depth=d, lam=lam,
                     class_labels=tuple(dataset.label_names), scaler=getattr(dataset, "scaler", None))
    return model, np.array(history)


def with_seed(cfg: TrainConfig, seed: int) -> TrainConfig:
    return replace(cfg, seed=seed)
