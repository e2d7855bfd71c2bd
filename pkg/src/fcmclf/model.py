"""Fuzzy cognitive map model and its forward semantics.

States are stored concept-major: an ``r x m`` matrix holds one observation
per column, the first ``n`` rows are input concepts and the remaining rows
are output concepts (one for the binary head, ``k`` for the multiclass head).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Optional, Sequence, Tuple

import numpy as np

from .exceptions import NumericalError, ShapeError

if TYPE_CHECKING:
    from .data import MinMaxScaler

#: Magnitude at which the sigmoid argument is clamped before ``exp``.
EXP_CLAMP = 500.0
#: Initial activation of every output concept ("undecided").
UNDECIDED = 0.5

_LOWEST = np.nextafter(0.0, 1.0)
_HIGHEST = np.nextafter(1.0, 0.0)


class Variant(str, enum.Enum):
    """Output head of the map."""

    FCMB = "FCMB"  # single output concept, log loss, 0.5 threshold
    FCMMC = "FCMMC"  # one output concept per class, softmax cross-entropy

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown classifier variant {value!r}; expected FCMB or FCMMC") from None


Trajectory = Tuple[np.ndarray, ...]


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class FcmModel:
    """Fully connected FCM classifier parameters.

    ``W`` is ``r x r`` and ``b`` has length ``r`` where ``r = n + 1`` for
    FCMB and ``r = n + k`` for FCMMC. The model is immutable; arrays are
    copied and flagged read-only on construction.
    """

    variant: Variant
    n: int
    k: int
    W: np.ndarray
    b: np.ndarray
    depth: int
    lam: float
    class_labels: Tuple[str, ...] = ()
    scaler: Optional["MinMaxScaler"] = field(default=None, compare=False)

    def __post_init__(self):
        variant = Variant.parse(self.variant)
        object.__setattr__(self, "variant", variant)
        if int(self.n) < 1:
            raise ShapeError(f"need at least one input concept, got n={self.n}")
        if int(self.k) < 2:
            raise ShapeError(f"need at least two classes, got k={self.k}")
        if variant is Variant.FCMB and self.k != 2:
            raise ShapeError(f"FCMB is a binary head and requires k=2, got k={self.k}")
        if int(self.depth) < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lambda must be a positive finite number, got {self.lam}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "depth", int(self.depth))
        object.__setattr__(self, "lam", float(self.lam))

        r = self.r
        W = _frozen(self.W)
        b = _frozen(self.b).reshape(-1)
        if W.shape != (r, r):
            raise ShapeError(f"W must be {r}x{r} for {variant.value} with n={self.n}, got {W.shape}")
        if b.shape != (r,):
            raise ShapeError(f"b must have length {r}, got {b.shape[0]}")
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
            raise NumericalError("W and b must be finite")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "b", b)

        labels = tuple(str(c) for c in self.class_labels) or tuple(str(i) for i in range(self.k))
        if len(labels) != self.k:
            raise ShapeError(f"expected {self.k} class labels, got {len(labels)}")
        object.__setattr__(self, "class_labels", labels)

    @property
    def r(self) -> int:
        """State size: input concepts plus output concepts."""
        return self.n + self.n_outputs

    @property
    def n_outputs(self) -> int:
        return 1 if self.variant is Variant.FCMB else self.k

    def with_params(self, W, b) -> "FcmModel":
        return replace(self, W=W, b=b)


def _squash(t):
    # logistic of an already scaled argument, kept strictly inside (0, 1)
    t = np.clip(t, -EXP_CLAMP, EXP_CLAMP)
    return np.clip(1.0 / (1.0 + np.exp(-t)), _LOWEST, _HIGHEST)


def activate(z, lam):
    """Shifted sigmoid ``1 / (1 + exp(-lam * (z - 0.5)))``.

    ``lam`` may be a scalar or an array broadcastable against ``z``. Results
    are kept strictly inside ``(0, 1)``.
    """
    return _squash(np.multiply(lam, np.subtract(z, UNDECIDED)))


def activation_derivative(A, lam):
    """Derivative of :func:`activate` expressed through its output ``A``."""
    A = np.asarray(A, dtype=np.float64)
    return np.multiply(lam, A * (1.0 - A))


def encode(X, model: FcmModel) -> np.ndarray:
    """Build the initial state from scaled features.

    ``X`` is ``n x m`` (or a length-``n`` vector); output concepts start at 0.5.
    """
    X = np.asarray(X, dtype=np.float64)
    vector = X.ndim == 1
    if vector:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] == 0:
        raise ShapeError(f"features must be a non-empty n x m matrix, got shape {X.shape}")
    if X.shape[0] != model.n:
        raise ShapeError(f"model expects n={model.n} input rows, got {X.shape[0]}")
    A = np.vstack([X, np.full((model.n_outputs, X.shape[1]), UNDECIDED)])
    return A[:, 0] if vector else A


def _step(A, W, b, lam):
    return activate(W @ A + b[:, None], lam)


def step(A, model: FcmModel) -> np.ndarray:
    """One application of the state equation ``f(W A + b)``."""
    A = np.asarray(A, dtype=np.float64)
    vector = A.ndim == 1
    if vector:
        A = A[:, None]
    if A.ndim != 2 or A.shape[0] != model.r:
        raise ShapeError(f"state must have {model.r} rows, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericalError("state contains non-finite values")
    out = _step(A, model.W, model.b, model.lam)
    return out[:, 0] if vector else out


def run_states(A0, W, b, lam, depth) -> Trajectory:
    """Unchecked trajectory ``A0 .. A_depth``; the hot path used by training."""
    states = [A0]
    for _ in range(depth):
        states.append(_step(states[-1], W, b, lam))
    return tuple(states)


def forward(X, model: FcmModel, depth: Optional[int] = None) -> Trajectory:
    """Encode ``X`` (``n x m``) and iterate the map ``depth`` times.

    Returns the ``depth + 1`` states, each ``r x m``. ``depth`` defaults to
    the model depth.
    """
    d = model.depth if depth is None else int(depth)
    if d < 0:
        raise ValueError(f"depth must be non-negative, got {d}")
    A0 = encode(X, model)
    if A0.ndim == 1:
        A0 = A0[:, None]
    if not np.all(np.isfinite(A0)):
        raise NumericalError("features contain non-finite values")
    return run_states(A0, model.W, model.b, model.lam, d)


def extract(A, model: FcmModel) -> np.ndarray:
    """Output-concept rows of a state."""
    A = np.asarray(A)
    return A[model.n:]


def normalize_weights(model: FcmModel):
    """Rescale each row of ``(W, b)`` into ``[-1, 1]``.

    Row ``i`` is divided by ``s_i = max(|W_i|, |b_i|)`` and its slope becomes
    ``lam * s_i``. All-zero rows keep ``s_i = 1``. Returns ``(W', b', lambdas)``
    with ``lambdas`` of length ``r``; use :func:`step_normalized` to iterate.
    """
    s = np.max(np.abs(np.column_stack([model.W, model.b])), axis=1)
    s = np.where(s > 0, s, 1.0)
    return model.W / s[:, None], model.b / s, model.lam * s


def step_normalized(A, W_norm, b_norm, lambdas, lam) -> np.ndarray:
    """State step with per-concept slopes, the counterpart of :func:`normalize_weights`.

    Because the activation is centred at 0.5, concept ``i`` needs its centre
    moved to ``0.5 * lam / lambdas[i]`` (that is ``0.5 / s_i``) for the
    rescaled row to reproduce the original step.
    """
    lambdas = np.asarray(lambdas, dtype=np.float64)
    A = np.asarray(A, dtype=np.float64)
    if A.ndim == 1:
        return _squash(lambdas * (W_norm @ A + b_norm) - UNDECIDED * lam)
    H = W_norm @ A + b_norm[:, None]
    return _squash(lambdas[:, None] * H - UNDECIDED * lam)


def make_model(W, b, *, n: int, depth: int, lam: float, variant="FCMMC",
               class_labels: Sequence[str] = (), k: Optional[int] = None, scaler=None) -> FcmModel:
    """Convenience constructor that infers ``k`` from the matrix size."""
    variant = Variant.parse(variant)
    W = np.asarray(W, dtype=np.float64)
    if k is None:
        k = 2 if variant is Variant.FCMB else W.shape[0] - n
    return FcmModel(variant=variant, n=n, k=k, W=W, b=b, depth=depth, lam=lam,
                    class_labels=tuple(class_labels), scaler=scaler)
