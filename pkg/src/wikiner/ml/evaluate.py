"""Stratified cross-validation and learning curves over a labeled corpus.

Reports are deterministic: the feature vocabulary is sorted, folds are
dealt from a seeded shuffle, and each fold trains with its own seed mixed
from (seed, fold index), so results do not depend on execution order or
worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .features import featurize, fit_feature_space
from .metrics import EvalReport, confusion_matrix, metrics_from_confusion
from .models import Hyperparams, class_order, default_hyperparams, train

LabeledSurface = tuple[str, str]  # (surface, label)


class BadK(ValueError):
    pass


class FractionTooSmall(ValueError):
    """A stratified subsample at this fraction would lose a class."""


@dataclass
class EvalConfig:
    folds: int = 5
    seed: int = 42
    include_misc: bool = True
    workers: int = 1
    hyperparams: Optional[Hyperparams] = None
    n_min: int = 1
    n_max: int = 5


def _mix_seed(seed: int, fold_index: int) -> int:
    """Stable per-fold RNG seed; independent of scheduling."""
    return (seed * 1000003 + (fold_index + 1) * 7919) % (2**32)


def stratified_kfold(
    labels: Sequence[str], k: int = 5, seed: int = 42
) -> list[list[int]]:
    """Deal indices into k folds, class by class, from a seeded shuffle.

    The folds partition all indices and per-class fold sizes differ by at
    most one.
    """
    if k < 2:
        raise BadK(f"k must be at least 2, got {k}")
    if k > len(labels):
        raise BadK(f"k={k} exceeds the {len(labels)} available items")
    rng = np.random.default_rng(seed)
    by_class: dict[str, list[int]] = {}
    for idx, label in enumerate(labels):
        by_class.setdefault(label, []).append(idx)
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for label in class_order(labels):
        indices = by_class[label]
        order = rng.permutation(len(indices))
        for offset in order:
            folds[cursor % k].append(indices[offset])
            cursor += 1
    return [sorted(fold) for fold in folds]


def _fit_and_score(
    model_kind: str,
    train_items: Sequence[LabeledSurface],
    test_items: Sequence[LabeledSurface],
    labels: Sequence[str],
    hp: Hyperparams,
    n_min: int,
    n_max: int,
) -> tuple[np.ndarray, EvalReport]:
    """Train on one split and return (test confusion, test report)."""
    space = fit_feature_space([s for s, _ in train_items], n_min, n_max)
    X_train = [featurize(s, space) for s, _ in train_items]
    y_train = [label for _, label in train_items]
    model = train(model_kind, X_train, y_train, space.size, hp)
    y_true = [label for _, label in test_items]
    y_pred = [model.predict(featurize(s, space)) for s, _ in test_items]
    matrix = confusion_matrix(y_true, y_pred, labels)
    return matrix, metrics_from_confusion(matrix, labels)


@dataclass
class CrossValidationResult:
    config_echo: dict
    fold_reports: list[EvalReport]
    pooled: EvalReport
    averaged: dict

    def to_json(self) -> dict:
        return {
            "config": self.config_echo,
            "folds": [r.to_json() for r in self.fold_reports],
            "pooled": self.pooled.to_json(),
            "averaged": self.averaged,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _mean(values: Sequence[float]) -> float:
    return float(sum(values) / len(values))


def _average_reports(reports: Sequence[EvalReport], labels: Sequence[str]) -> dict:
    """Arithmetic mean of per-fold metrics."""
    per_class = {
        label: {
            "precision": _mean([r.per_class[label].precision for r in reports]),
            "recall": _mean([r.per_class[label].recall for r in reports]),
            "f1": _mean([r.per_class[label].f1 for r in reports]),
        }
        for label in labels
    }
    return {
        "per_class": per_class,
        "micro": {
            "precision": _mean([r.micro.precision for r in reports]),
            "recall": _mean([r.micro.recall for r in reports]),
            "f1": _mean([r.micro.f1 for r in reports]),
        },
        "weighted_macro": {
            "precision": _mean([r.weighted_macro.precision for r in reports]),
            "recall": _mean([r.weighted_macro.recall for r in reports]),
            "f1": _mean([r.weighted_macro.f1 for r in reports]),
        },
        "accuracy": _mean([r.accuracy for r in reports]),
    }


def cross_validate(
    corpus: Sequence[LabeledSurface],
    model_kind: str,
    config: Optional[EvalConfig] = None,
) -> CrossValidationResult:
    """Stratified k-fold evaluation with per-fold feature spaces.

    Each fold fits its vocabulary on the training split only, trains with
    a seed mixed from (seed, fold index), and scores the held-out fold.
    The averaged section is the mean of per-fold metrics; the pooled
    section recomputes micro metrics from the summed confusion matrix.
    """
    cfg = config or EvalConfig()
    items = list(corpus)
    if not cfg.include_misc:
        items = [(s, label) for s, label in items if label != "MISC"]
    labels = class_order([label for _, label in items])
    folds = stratified_kfold([label for _, label in items], cfg.folds, cfg.seed)

    def run_fold(fold_index: int) -> tuple[np.ndarray, EvalReport]:
        test_idx = set(folds[fold_index])
        train_items = [it for i, it in enumerate(items) if i not in test_idx]
        test_items = [items[i] for i in folds[fold_index]]
        hp = cfg.hyperparams or default_hyperparams(model_kind)
        hp = Hyperparams(**{**hp.to_json(), "seed": _mix_seed(cfg.seed, fold_index)})
        return _fit_and_score(
            model_kind, train_items, test_items, labels, hp, cfg.n_min, cfg.n_max
        )

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(run_fold, range(cfg.folds)))
    else:
        outcomes = [run_fold(i) for i in range(cfg.folds)]

    fold_reports = [report for _, report in outcomes]
    pooled_confusion = np.sum([matrix for matrix, _ in outcomes], axis=0)
    config_echo = {
        "model": model_kind,
        "folds": cfg.folds,
        "seed": cfg.seed,
        "include_misc": cfg.include_misc,
        "ngram_range": [cfg.n_min, cfg.n_max],
        "hyperparams": (cfg.hyperparams or default_hyperparams(model_kind)).to_json(),
    }
    pooled = metrics_from_confusion(pooled_confusion, labels, config_echo)
    return CrossValidationResult(
        config_echo=config_echo,
        fold_reports=fold_reports,
        pooled=pooled,
        averaged=_average_reports(fold_reports, labels),
    )


def learning_curve(
    corpus: Sequence[LabeledSurface],
    fractions: Sequence[float],
    model_kind: str,
    config: Optional[EvalConfig] = None,
) -> list[tuple[float, float]]:
    """Accuracy on a fixed test split as the training split is subsampled.

    The test split is the first stratified fold; each fraction keeps a
    stratified prefix of the seeded-shuffled training pool. A fraction
    that would empty out a class raises FractionTooSmall.
    """
    cfg = config or EvalConfig()
    if list(fractions) != sorted(fractions) or not fractions:
        raise ValueError("fractions must be a non-empty ascending list")
    if any(not 0 < f <= 1 for f in fractions):
        raise ValueError("fractions must lie in (0, 1]")
    items = list(corpus)
    if not cfg.include_misc:
        items = [(s, label) for s, label in items if label != "MISC"]
    labels = class_order([label for _, label in items])
    folds = stratified_kfold([label for _, label in items], cfg.folds, cfg.seed)
    test_items = [items[i] for i in folds[0]]
    pool_idx = [i for i in range(len(items)) if i not in set(folds[0])]

    rng = np.random.default_rng(cfg.seed)
    by_class: dict[str, list[int]] = {}
    for i in pool_idx:
        by_class.setdefault(items[i][1], []).append(i)
    shuffled = {
        label: [indices[j] for j in rng.permutation(len(indices))]
        for label, indices in ((l, by_class[l]) for l in labels)
    }

    hp = cfg.hyperparams or default_hyperparams(model_kind)
    hp = Hyperparams(**{**hp.to_json(), "seed": _mix_seed(cfg.seed, 0)})

    points: list[tuple[float, float]] = []
    for fraction in fractions:
        subsample: list[int] = []
        for label in labels:
            take = int(round(fraction * len(shuffled[label])))
            if take == 0:
                raise FractionTooSmall(
                    f"fraction {fraction} drops class {label!r} entirely"
                )
            subsample.extend(shuffled[label][:take])
        train_items = [items[i] for i in sorted(subsample)]
        matrix, _ = _fit_and_score(
            model_kind, train_items, test_items, labels, hp, cfg.n_min, cfg.n_max
        )
        accuracy = float(np.trace(matrix)) / float(matrix.sum())
        points.append((fraction, accuracy))
    return points


def learning_curve_csv(points: Sequence[tuple[float, float]]) -> str:
    lines = ["fraction,accuracy"]
    lines.extend(f"{fraction},{accuracy}" for fraction, accuracy in points)
    return "\n".join(lines) + "\n"


def write_report(result: CrossValidationResult, path: Path) -> None:
    tmp = Path(path).with_suffix(".tmp")
    tmp.write_text(result.dumps(), encoding="utf-8")
    tmp.replace(path)
