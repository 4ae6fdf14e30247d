"""Multi-label evaluation: accuracies, micro precision/recall, Hamming loss,
the no-genre ratio, and per-genre predicted/target histograms.

Two accuracies are reported side by side: elementwise accuracy
((TP+TN)/(N*K), the complement of Hamming loss) and subset accuracy
(exact row match), because the two disagree for multi-label data and
both readings are in circulation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import EmptyMatrix, ShapeMismatch


@dataclass(frozen=True)
class ConfusionCounts:
    """Per-label confusion counts; tp+fp+fn+tn = N for every label."""

    tp: np.ndarray
    fp: np.ndarray
    fn: np.ndarray
    tn: np.ndarray


@dataclass(frozen=True)
class EvaluationReport:
    subset_accuracy: float
    elementwise_accuracy: float
    precision_micro: float
    recall_micro: float
    hamming_loss: float
    no_genre_ratio: float
    genres: tuple[str, ...]
    predicted_counts: tuple[int, ...]
    target_counts: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "subset_accuracy": self.subset_accuracy,
            "elementwise_accuracy": self.elementwise_accuracy,
            "precision_micro": self.precision_micro,
            "recall_micro": self.recall_micro,
            "hamming_loss": self.hamming_loss,
            "no_genre_ratio": self.no_genre_ratio,
            "histogram": [
                {"genre": g, "predicted": p, "target": t}
                for g, p, t in zip(self.genres, self.predicted_counts, self.target_counts)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        lines = [
            f"{'subset accuracy':<24}{self.subset_accuracy:.4f}",
            f"{'elementwise accuracy':<24}{self.elementwise_accuracy:.4f}",
            f"{'precision (micro)':<24}{self.precision_micro:.4f}",
            f"{'recall (micro)':<24}{self.recall_micro:.4f}",
            f"{'hamming loss':<24}{self.hamming_loss:.4f}",
            f"{'no-genre ratio':<24}{self.no_genre_ratio:.4f}",
            "",
            f"{'genre':<16}{'predicted':>10}{'target':>10}",
        ]
        for g, p, t in zip(self.genres, self.predicted_counts, self.target_counts):
            lines.append(f"{g:<16}{p:>10}{t:>10}")
        return "\n".join(lines) + "\n"


def _check_shapes(pred: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=np.uint8)
    target = np.asarray(target, dtype=np.uint8)
    if pred.shape != target.shape or pred.ndim != 2:
        raise ShapeMismatch(f"prediction {pred.shape} vs target {target.shape}")
    return pred, target


def confusion_counts(pred: np.ndarray, target: np.ndarray) -> ConfusionCounts:
    pred, target = _check_shapes(pred, target)
    p = pred.astype(bool)
    t = target.astype(bool)
    return ConfusionCounts(
        tp=(p & t).sum(axis=0),
        fp=(p & ~t).sum(axis=0),
        fn=(~p & t).sum(axis=0),
        tn=(~p & ~t).sum(axis=0),
    )


def elementwise_accuracy(counts: ConfusionCounts) -> float:
    """(sum TP + sum TN) / (N*K): fraction of individual bits predicted right."""
    total = int((counts.tp + counts.fp + counts.fn + counts.tn).sum())
    return float((counts.tp.sum() + counts.tn.sum()) / total)


def subset_accuracy(pred: np.ndarray, target: np.ndarray) -> float:
    """Fraction of rows whose predicted label set matches the target exactly."""
    pred, target = _check_shapes(pred, target)
    return float(np.mean(np.all(pred == target, axis=1)))


def micro_precision(counts: ConfusionCounts) -> float:
    """sum TP / (sum TP + sum FP); 1.0 when nothing was predicted positive."""
    tp, fp = int(counts.tp.sum()), int(counts.fp.sum())
    return 1.0 if tp + fp == 0 else tp / (tp + fp)


def micro_recall(counts: ConfusionCounts) -> float:
    """sum TP / (sum TP + sum FN); 1.0 when there are no positive targets."""
    tp, fn = int(counts.tp.sum()), int(counts.fn.sum())
    return 1.0 if tp + fn == 0 else tp / (tp + fn)


def hamming_loss(pred: np.ndarray, target: np.ndarray) -> float:
    """Fraction of label bits that disagree between prediction and target."""
    pred, target = _check_shapes(pred, target)
    return float(np.mean(pred != target))


def no_genre_ratio(pred: np.ndarray) -> float:
    """Fraction of rows with no predicted label at all."""
    pred = np.asarray(pred, dtype=np.uint8)
    if pred.size == 0:
        raise EmptyMatrix("no-genre ratio is undefined for an empty matrix")
    return float(np.mean(~pred.any(axis=1)))


def evaluate(pred: np.ndarray, target: np.ndarray, genres: list[str]) -> EvaluationReport:
    pred, target = _check_shapes(pred, target)
    if len(genres) != pred.shape[1]:
        raise ShapeMismatch("genre names do not match label columns")
    counts = confusion_counts(pred, target)
    return EvaluationReport(
        subset_accuracy=subset_accuracy(pred, target),
        elementwise_accuracy=elementwise_accuracy(counts),
        precision_micro=micro_precision(counts),
        recall_micro=micro_recall(counts),
        hamming_loss=hamming_loss(pred, target),
        no_genre_ratio=no_genre_ratio(pred),
        genres=tuple(genres),
        predicted_counts=tuple(int(c) for c in pred.sum(axis=0)),
        target_counts=tuple(int(c) for c in target.sum(axis=0)),
    )
