"""Confusion-matrix metrics: per-class and micro-averaged P/R/F.

Micro values come from pooled true/false positive/negative counts. For
single-label full-coverage classification the pooled false-positive and
false-negative totals coincide, so micro-P = micro-R = micro-F = accuracy.
A class-weighted macro average is reported alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class EmptyConfusion(ValueError):
    pass


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
        }


@dataclass
class EvalReport:
    """Per-class and pooled metrics for one prediction set."""

    labels: tuple[str, ...]
    per_class: dict[str, ClassMetrics]
    micro: ClassMetrics
    weighted_macro: ClassMetrics
    accuracy: float
    confusion: list[list[int]]
    zero_division_hit: bool = False
    config_echo: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "per_class": {k: v.to_json() for k, v in self.per_class.items()},
            "micro": self.micro.to_json(),
            "weighted_macro": self.weighted_macro.to_json(),
            "accuracy": self.accuracy,
            "confusion": self.confusion,
            "zero_division_hit": self.zero_division_hit,
            "config_echo": self.config_echo,
        }


def confusion_matrix(
    y_true: Sequence[str], y_pred: Sequence[str], labels: Sequence[str]
) -> np.ndarray:
    """Square count matrix, rows = true label, columns = predicted."""
    if len(y_true) != len(y_pred):
        raise ValueError(f"{len(y_true)} truths vs {len(y_pred)} predictions")
    index = {label: i for i, label in enumerate(labels)}
    matrix = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        matrix[index[t], index[p]] += 1
    return matrix


def _ratio(num: float, den: float) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def metrics_from_confusion(
    confusion: np.ndarray, labels: Sequence[str], config_echo: dict | None = None
) -> EvalReport:
    """All report fields from one confusion matrix (rows = true)."""
    matrix = np.asarray(confusion, dtype=np.int64)
    if matrix.size == 0 or matrix.sum() == 0:
        raise EmptyConfusion("confusion matrix holds no predictions")
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"confusion matrix must be square, got {matrix.shape}")
    if matrix.shape[0] != len(labels):
        raise ValueError("label list does not match matrix dimension")

    zero_hit = False
    per_class: dict[str, ClassMetrics] = {}
    tp_total = fp_total = fn_total = 0
    for i, label in enumerate(labels):
        tp = int(matrix[i, i])
        fp = int(matrix[:, i].sum() - tp)
        fn = int(matrix[i, :].sum() - tp)
        precision, p_zero = _ratio(tp, tp + fp)
        recall, r_zero = _ratio(tp, tp + fn)
        zero_hit = zero_hit or p_zero or r_zero
        per_class[label] = ClassMetrics(
            precision=precision,
            recall=recall,
            f1=_f1(precision, recall),
            support=int(matrix[i, :].sum()),
        )
        tp_total += tp
        fp_total += fp
        fn_total += fn

    micro_p, mp_zero = _ratio(tp_total, tp_total + fp_total)
    micro_r, mr_zero = _ratio(tp_total, tp_total + fn_total)
    zero_hit = zero_hit or mp_zero or mr_zero
    total = int(matrix.sum())
    micro = ClassMetrics(
        precision=micro_p,
        recall=micro_r,
        f1=_f1(micro_p, micro_r),
        support=total,
    )

    supports = np.array([per_class[l].support for l in labels], dtype=np.float64)
    weights = supports / supports.sum()
    weighted_macro = ClassMetrics(
        precision=float(
            sum(w * per_class[l].precision for w, l in zip(weights, labels))
        ),
        recall=float(sum(w * per_class[l].recall for w, l in zip(weights, labels))),
        f1=float(sum(w * per_class[l].f1 for w, l in zip(weights, labels))),
        support=total,
    )

    return EvalReport(
        labels=tuple(labels),
        per_class=per_class,
        micro=micro,
        weighted_macro=weighted_macro,
        accuracy=float(np.trace(matrix)) / total,
        confusion=matrix.tolist(),
        zero_division_hit=zero_hit,
        config_echo=dict(config_echo or {}),
    )


def evaluate_predictions(
    y_true: Sequence[str],
    y_pred: Sequence[str],
    labels: Sequence[str],
    config_echo: dict | None = None,
) -> EvalReport:
    return metrics_from_confusion(
        confusion_matrix(y_true, y_pred, labels), labels, config_echo
    )
