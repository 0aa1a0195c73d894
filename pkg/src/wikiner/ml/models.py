"""From-scratch classifiers over sparse count vectors.

Four trainable kinds: multinomial logistic regression (mini-batch gradient
descent on softmax cross-entropy + L2), a linear SVM (one-vs-rest hinge +
L2, same optimizer), an online SGD log-loss classifier with a decaying
learning-rate schedule, and multinomial Naive Bayes with Laplace
smoothing. The loss/gradient routines for the gradient-descent models are
exposed so tests can check them against finite differences.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from ..corpus import LABELS
from .features import SparseVector

KIND_LR = "lr"
KIND_SVM = "svm"
KIND_SGD = "sgd"
KIND_NB = "nb"

MODEL_KINDS = (KIND_LR, KIND_SVM, KIND_SGD, KIND_NB)


class DimensionMismatch(ValueError):
    pass


class DegenerateData(UserWarning):
    """Training data held a single class; the model is a constant predictor."""


@dataclass(frozen=True)
class Hyperparams:
    learning_rate: float = 0.1
    l2_lambda: float = 1e-4
    epochs: int = 100
    batch_size: int = 32
    decay: float = 0.01
    alpha: float = 1.0
    seed: int = 0

    def to_json(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "l2_lambda": self.l2_lambda,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "decay": self.decay,
            "alpha": self.alpha,
            "seed": self.seed,
        }


def default_hyperparams(kind: str, seed: int = 0) -> Hyperparams:
    """Per-kind defaults; the SGD row differs from LR by design."""
    base = Hyperparams(seed=seed)
    if kind in (KIND_LR, KIND_SVM):
        return base
    if kind == KIND_SGD:
        return replace(base, epochs=5, batch_size=1, decay=0.01)
    if kind == KIND_NB:
        return base
    raise ValueError(f"unknown model kind {kind!r}")


def class_order(labels: Sequence[str]) -> tuple[str, ...]:
    """Classes present in the data, in the fixed PER<LOC<ORG<MISC order."""
    present = set(labels)
    ordered = [l for l in LABELS if l in present]
    ordered.extend(sorted(present - set(LABELS)))
    return tuple(ordered)


def to_dense(X: Sequence[SparseVector], n_features: int) -> np.ndarray:
    dense = np.zeros((len(X), n_features), dtype=np.float64)
    for row, vec in enumerate(X):
        for idx, count in vec.items():
            if idx >= n_features:
                raise DimensionMismatch(
                    f"feature index {idx} outside space of size {n_features}"
                )
            dense[row, idx] = count
    return dense


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def lr_loss_and_grad(
    W: np.ndarray,
    b: np.ndarray,
    X: np.ndarray,
    y_idx: np.ndarray,
    l2_lambda: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Softmax cross-entropy + 0.5*lambda*||W||^2 and its gradients."""
    n = X.shape[0]
    probs = _softmax(X @ W.T + b)
    log_likeli = np.log(probs[np.arange(n), y_idx])
    loss = -log_likeli.mean() + 0.5 * l2_lambda * float((W * W).sum())
    delta = probs
    delta[np.arange(n), y_idx] -= 1.0
    grad_W = delta.T @ X / n + l2_lambda * W
    grad_b = delta.mean(axis=0)
    return float(loss), grad_W, grad_b


def svm_loss_and_grad(
    W: np.ndarray,
    b: np.ndarray,
    X: np.ndarray,
    y_idx: np.ndarray,
    l2_lambda: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """One-vs-rest hinge + 0.5*lambda*||W||^2 and its (sub)gradients."""
    n, _ = X.shape
    n_classes = W.shape[0]
    scores = X @ W.T + b
    signs = -np.ones((n, n_classes))
    signs[np.arange(n), y_idx] = 1.0
    margins = 1.0 - signs * scores
    active = margins > 0
    loss = margins[active].sum() / n + 0.5 * l2_lambda * float((W * W).sum())
    dscores = np.where(active, -signs, 0.0) / n
    grad_W = dscores.T @ X + l2_lambda * W
    grad_b = dscores.sum(axis=0)
    return float(loss), grad_W, grad_b


@dataclass
class LinearModel:
    kind: str
    classes: tuple[str, ...]
    weights: np.ndarray  # (classes, features)
    bias: np.ndarray  # (classes,)
    hyperparams: Hyperparams

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    def _scores(self, x: SparseVector) -> np.ndarray:
        scores = self.bias.copy()
        for idx, count in x.items():
            if idx >= self.n_features:
                raise DimensionMismatch(
                    f"feature index {idx} outside model space of "
                    f"size {self.n_features}"
                )
            scores += count * self.weights[:, idx]
        return scores

    def predict(self, x: SparseVector) -> str:
        # np.argmax returns the first maximum: ties break by class order.
        return self.classes[int(np.argmax(self._scores(x)))]

    def predict_proba(self, x: SparseVector) -> dict[str, float]:
        probs = _softmax(self._scores(x))
        return dict(zip(self.classes, probs.tolist()))


@dataclass
class NaiveBayesModel:
    classes: tuple[str, ...]
    class_log_priors: np.ndarray  # (classes,)
    feature_log_likelihoods: np.ndarray  # (classes, features)
    alpha: float
    hyperparams: Hyperparams = field(default_factory=Hyperparams)
    kind: str = KIND_NB

    @property
    def n_features(self) -> int:
        return self.feature_log_likelihoods.shape[1]

    def _log_joint(self, x: SparseVector) -> np.ndarray:
        scores = self.class_log_priors.copy()
        for idx, count in x.items():
            if idx >= self.n_features:
                raise DimensionMismatch(
                    f"feature index {idx} outside model space of "
                    f"size {self.n_features}"
                )
            scores += count * self.feature_log_likelihoods[:, idx]
        return scores

    def predict(self, x: SparseVector) -> str:
        return self.classes[int(np.argmax(self._log_joint(x)))]

    def predict_proba(self, x: SparseVector) -> dict[str, float]:
        log_joint = self._log_joint(x)
        log_joint -= log_joint.max()
        probs = np.exp(log_joint)
        probs /= probs.sum()
        return dict(zip(self.classes, probs.tolist()))


Model = LinearModel | NaiveBayesModel


def _check_training_inputs(
    X: Sequence[SparseVector], y: Sequence[str]
) -> tuple[str, ...]:
    if len(X) != len(y):
        raise ValueError(f"{len(X)} vectors vs {len(y)} labels")
    if not X:
        raise ValueError("empty training set")
    classes = class_order(y)
    if len(classes) == 1:
        warnings.warn(
            f"training data has a single class {classes[0]!r}; "
            "the model degenerates to a constant predictor",
            DegenerateData,
        )
    return classes


def _train_batch_gd(
    kind: str,
    X: Sequence[SparseVector],
    y: Sequence[str],
    n_features: int,
    hp: Hyperparams,
) -> LinearModel:
    classes = _check_training_inputs(X, y)
    index = {c: i for i, c in enumerate(classes)}
    dense = to_dense(X, n_features)
    y_idx = np.array([index[label] for label in y], dtype=np.int64)
    W = np.zeros((len(classes), n_features))
    b = np.zeros(len(classes))
    objective = lr_loss_and_grad if kind == KIND_LR else svm_loss_and_grad
    if len(classes) > 1:
        rng = np.random.default_rng(hp.seed)
        n = len(X)
        for _ in range(hp.epochs):
            perm = rng.permutation(n)
            for start in range(0, n, hp.batch_size):
                batch = perm[start : start + hp.batch_size]
                _, grad_W, grad_b = objective(
                    W, b, dense[batch], y_idx[batch], hp.l2_lambda
                )
                W -= hp.learning_rate * grad_W
                b -= hp.learning_rate * grad_b
    return LinearModel(kind=kind, classes=classes, weights=W, bias=b, hyperparams=hp)


def _train_sgd_log(
    X: Sequence[SparseVector],
    y: Sequence[str],
    n_features: int,
    hp: Hyperparams,
) -> LinearModel:
    classes = _check_training_inputs(X, y)
    index = {c: i for i, c in enumerate(classes)}
    dense = to_dense(X, n_features)
    y_idx = np.array([index[label] for label in y], dtype=np.int64)
    W = np.zeros((len(classes), n_features))
    b = np.zeros(len(classes))
    if len(classes) > 1:
        rng = np.random.default_rng(hp.seed)
        step = 0
        for _ in range(hp.epochs):
            for i in rng.permutation(len(X)):
                lr = hp.learning_rate / (1.0 + step * hp.decay)
                x = dense[i]
                probs = _softmax(W @ x + b)
                probs[y_idx[i]] -= 1.0
                W -= lr * (np.outer(probs, x) + hp.l2_lambda * W)
                b -= lr * probs
                step += 1
    return LinearModel(
        kind=KIND_SGD, classes=classes, weights=W, bias=b, hyperparams=hp
    )


def _train_naive_bayes(
    X: Sequence[SparseVector],
    y: Sequence[str],
    n_features: int,
    hp: Hyperparams,
) -> NaiveBayesModel:
    classes = _check_training_inputs(X, y)
    index = {c: i for i, c in enumerate(classes)}
    counts = np.zeros((len(classes), n_features))
    class_sizes = np.zeros(len(classes))
    for vec, label in zip(X, y):
        row = index[label]
        class_sizes[row] += 1
        for idx, count in vec.items():
            if idx >= n_features:
                raise DimensionMismatch(
                    f"feature index {idx} outside space of size {n_features}"
                )
            counts[row, idx] += count
    smoothed = counts + hp.alpha
    likelihoods = smoothed / smoothed.sum(axis=1, keepdims=True)
    return NaiveBayesModel(
        classes=classes,
        class_log_priors=np.log(class_sizes / class_sizes.sum()),
        feature_log_likelihoods=np.log(likelihoods),
        alpha=hp.alpha,
        hyperparams=hp,
    )


def train(
    kind: str,
    X: Sequence[SparseVector],
    y: Sequence[str],
    n_features: Optional[int] = None,
    hyperparams: Optional[Hyperparams] = None,
):
    """Train one of the four model kinds on sparse count vectors."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    if n_features is None:
        n_features = 1 + max((max(vec) for vec in X if vec), default=-1)
    hp = hyperparams or default_hyperparams(kind)
    if kind in (KIND_LR, KIND_SVM):
        return _train_batch_gd(kind, X, y, n_features, hp)
    if kind == KIND_SGD:
        return _train_sgd_log(X, y, n_features, hp)
    return _train_naive_bayes(X, y, n_features, hp)
