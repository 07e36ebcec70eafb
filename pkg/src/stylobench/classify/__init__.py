"""The four attribution classifiers behind one train/predict interface."""

from __future__ import annotations

import enum
from typing import Sequence

from .delta import (
    DegenerateInputError,
    NearestModel,
    classify_nearest,
    cosine_delta_distance,
    delta_distance,
    train_nearest,
)
from .nsc import NscModel, classify_nsc, train_nsc
from .svm import SvmModel, classify_svm, train_svm


class ClassifierKind(enum.Enum):
    DELTA = "delta"
    COSINE = "cosine"
    SVM = "svm"
    NSC = "nsc"

    @classmethod
    def parse(cls, text: str) -> "ClassifierKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown classifier {text!r} (choose from {choices})") from None


def train(kind: ClassifierKind, rows, labels: Sequence[str], doc_ids: Sequence[str] | None = None):
    if kind is ClassifierKind.DELTA:
        return train_nearest(rows, labels, "delta", doc_ids)
    if kind is ClassifierKind.COSINE:
        return train_nearest(rows, labels, "cosine", doc_ids)
    if kind is ClassifierKind.SVM:
        return train_svm(rows, labels)
    if kind is ClassifierKind.NSC:
        return train_nsc(rows, labels)
    raise ValueError(kind)


def predict(model, z) -> str:
    if isinstance(model, NearestModel):
        return classify_nearest(model, z)
    if isinstance(model, SvmModel):
        return classify_svm(model, z)
    if isinstance(model, NscModel):
        return classify_nsc(model, z)
    raise TypeError(f"not a trained model: {type(model).__name__}")


__all__ = [
    "ClassifierKind",
    "DegenerateInputError",
    "NearestModel",
    "NscModel",
    "SvmModel",
    "classify_nearest",
    "classify_nsc",
    "classify_svm",
    "cosine_delta_distance",
    "delta_distance",
    "predict",
    "train",
    "train_nearest",
    "train_nsc",
    "train_svm",
]
