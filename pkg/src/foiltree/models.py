"""Opaque classifier contract plus the built-in trainable models.

The explainer only ever sees ``predict`` / ``predict_distribution``, so any
object satisfying :class:`ClassifierOracle` can be explained. The built-in
kinds (logistic regression, random forest, a small MLP and a hinge-loss
linear model) are scikit-learn estimators wrapped to present dataset-wide
class indices and full-width probability vectors.
"""

from __future__ import annotations

import pickle
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np
from sklearn.ensemble import RandomForestClassifier
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import SGDClassifier
from sklearn.neural_network import MLPClassifier
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from .dataset import Dataset
from .errors import LengthMismatch

MODEL_KINDS = ("logistic-regression", "random-forest", "mlp", "linear-svm")

_DEFAULTS: dict[str, dict] = {
    "logistic-regression": {"alpha": 1e-4, "max_iter": 500},
    "random-forest": {"n_estimators": 100, "criterion": "gini", "max_depth": None, "bootstrap": True},
    "mlp": {"hidden": 16, "max_iter": 500, "solver": "lbfgs"},
    "linear-svm": {"alpha": 1e-3, "max_iter": 500},
}


@runtime_checkable
class ClassifierOracle(Protocol):
    """Everything the explainer is allowed to know about a model."""

    n_classes: int

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Class index for each row of ``X`` (2-D in, 1-D out)."""

    def predict_distribution(self, X: np.ndarray) -> np.ndarray:
        """Probability row per instance; rows sum to 1 and argmax equals predict."""


class _ConstantEstimator:
    """Stand-in used when the training split contains a single class."""

    def __init__(self, label: int):
        self.classes_ = np.array([label])

    def fit(self, X, y):
        return self

    def predict(self, X):
        return np.full(len(X), self.classes_[0], dtype=np.intp)

    def predict_proba(self, X):
        return np.ones((len(X), 1))


@dataclass
class TrainedModel:
    """A fitted classifier exposing the :class:`ClassifierOracle` contract."""

    kind: str
    seed: int
    hyperparams: dict
    n_classes: int
    class_names: list[str]
    estimator: object
    converged: bool = True

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.asarray(self.estimator.predict(X), dtype=np.intp)

    def predict_distribution(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        est = self.estimator
        if hasattr(est, "predict_proba"):
            proba = est.predict_proba(X)
            classes = est.classes_
        else:
            # hinge loss has no calibrated probabilities; normalize the
            # decision scores so downstream foil derivation still works
            scores = est.decision_function(X)
            if scores.ndim == 1:
                scores = np.column_stack([-scores, scores])
            scores = scores - scores.max(axis=1, keepdims=True)
            proba = np.exp(scores)
            proba /= proba.sum(axis=1, keepdims=True)
            classes = est[-1].classes_ if hasattr(est, "__getitem__") else est.classes_
        if len(classes) == self.n_classes:
            return proba
        full = np.zeros((proba.shape[0], self.n_classes))
        full[:, np.asarray(classes, dtype=np.intp)] = proba
        return full

    def predict_one(self, x: np.ndarray) -> int:
        return int(self.predict(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def distribution_one(self, x: np.ndarray) -> np.ndarray:
        return self.predict_distribution(np.asarray(x, dtype=float).reshape(1, -1))[0]


def _make_estimator(kind: str, hp: dict, seed: int):
    if kind == "logistic-regression":
        return make_pipeline(
            StandardScaler(),
            SGDClassifier(
                loss="log_loss", penalty="l2", alpha=hp["alpha"], max_iter=hp["max_iter"], random_state=seed
            ),
        )
    if kind == "random-forest":
        return RandomForestClassifier(
            n_estimators=hp["n_estimators"],
            criterion=hp["criterion"],
            max_depth=hp["max_depth"],
            bootstrap=hp["bootstrap"],
            random_state=seed,
            n_jobs=1,
        )
    if kind == "mlp":
        return make_pipeline(
            StandardScaler(),
            MLPClassifier(
                hidden_layer_sizes=(hp["hidden"],),
                activation="logistic",
                solver=hp["solver"],
                max_iter=hp["max_iter"],
                random_state=seed,
            ),
        )
    if kind == "linear-svm":
        return make_pipeline(
            StandardScaler(),
            SGDClassifier(
                loss="hinge", penalty="l2", alpha=hp["alpha"], max_iter=hp["max_iter"], random_state=seed
            ),
        )
    raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def fit(kind: str, train: Dataset, hyperparams: dict | None = None, seed: int = 0) -> TrainedModel:
    """Train a built-in classifier on the training split.

    An iteration cap hit during optimization is reported through the
    ``converged`` flag; the model is still returned.
    """
    hp = dict(_DEFAULTS.get(kind, {}))
    for key, value in (hyperparams or {}).items():
        if key not in hp:
            raise ValueError(f"unknown hyperparameter {key!r} for kind {kind!r}")
        hp[key] = value

    if np.unique(train.y).size == 1:
        est = _ConstantEstimator(int(train.y[0]))
        if kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")
        return TrainedModel(kind, seed, hp, train.n_classes, list(train.class_names), est)

    est = _make_estimator(kind, hp, seed)
    converged = True
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConvergenceWarning)
        est.fit(train.X, train.y)
    if any(issubclass(w.category, ConvergenceWarning) for w in caught):
        converged = False
    return TrainedModel(kind, seed, hp, train.n_classes, list(train.class_names), est, converged)


def f1_score(predicted, truth, averaging: str = "binary", n_classes: int | None = None) -> float:
    """Harmonic mean of precision and recall.

    ``binary`` scores class 1 as the positive class. ``macro`` averages
    per-class F1 over all classes up to ``n_classes`` (inferred from the
    data when omitted); a class absent from both vectors scores 1.0.
    """
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise LengthMismatch(f"predicted has shape {predicted.shape}, truth has {truth.shape}")
    if predicted.size == 0:
        raise LengthMismatch("empty vectors")
    if averaging == "binary":
        return _binary_f1(predicted == 1, truth == 1)
    if averaging == "macro":
        k = n_classes if n_classes is not None else int(max(predicted.max(), truth.max())) + 1
        scores = []
        for c in range(k):
            if not (truth == c).any() and not (predicted == c).any():
                scores.append(1.0)
            else:
                scores.append(_binary_f1(predicted == c, truth == c))
        return float(np.mean(scores))
    raise ValueError(f"averaging must be 'binary' or 'macro', got {averaging!r}")


def _binary_f1(pred_pos: np.ndarray, true_pos: np.ndarray) -> float:
    tp = np.sum(pred_pos & true_pos)
    fp = np.sum(pred_pos & ~true_pos)
    fn = np.sum(~pred_pos & true_pos)
    denom = 2 * tp + fp + fn
    if denom == 0:
        return 0.0
    return float(2 * tp / denom)


_FORMAT = "foiltree-model"
_VERSION = 1


def save_model(model: TrainedModel, path: str | Path) -> None:
    """Serialize a trained model as a self-describing versioned blob."""
    blob = {
        "format": _FORMAT,
        "version": _VERSION,
        "kind": model.kind,
        "seed": model.seed,
        "hyperparams": model.hyperparams,
        "n_classes": model.n_classes,
        "class_names": model.class_names,
        "converged": model.converged,
        "estimator": model.estimator,
    }
    with open(path, "wb") as fh:
        pickle.dump(blob, fh)


def load_model(path: str | Path) -> TrainedModel:
    with open(path, "rb") as fh:
        blob = pickle.load(fh)
    if blob.get("format") != _FORMAT:
        raise ValueError(f"{path}: not a saved model")
    if blob.get("version") != _VERSION:
        raise ValueError(f"{path}: unsupported model format version {blob.get('version')}")
    return TrainedModel(
        kind=blob["kind"],
        seed=blob["seed"],
        hyperparams=blob["hyperparams"],
        n_classes=blob["n_classes"],
        class_names=blob["class_names"],
        estimator=blob["estimator"],
        converged=blob["converged"],
    )
