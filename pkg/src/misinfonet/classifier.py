"""Logistic-regression classification of domains from user-sharing vectors.

Features are sparse binary domain-by-user vectors; labels are misinfo (1)
vs info (0). Training minimizes L2-regularized mean cross-entropy by full
batch gradient descent with a step-halving safeguard (loss never increases
across epochs); the decision threshold is 0.5.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .sharing import SharingMatrix

__all__ = [
    "Dataset",
    "Hyperparams",
    "ClassifierModel",
    "EvalMetrics",
    "dataset_from_matrix",
    "split",
    "oversample",
    "loss_and_gradient",
    "train",
    "tune",
    "evaluate",
    "predict",
    "save_model",
    "load_model",
]


@dataclass
class Dataset:
    features: sp.csr_matrix  # domains x users, binary
    labels: np.ndarray  # 1 = misinfo, 0 = info
    domain_names: list[str]
    user_ids: list[str]

    def __post_init__(self):
        n = self.features.shape[0]
        if not (n == len(self.labels) == len(self.domain_names)):
            raise ValueError(
                f"row mismatch: {n} feature rows, {len(self.labels)} labels, "
                f"{len(self.domain_names)} names"
            )

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(
            features=self.features[indices],
            labels=self.labels[indices],
            domain_names=[self.domain_names[i] for i in indices],
            user_ids=self.user_ids,
        )


@dataclass
class Hyperparams:
    l2_strength: float = 0.0
    learning_rate: float = 1.0
    max_epochs: int = 500
    convergence_tol: float = 1e-6


@dataclass
class ClassifierModel:
    weights: np.ndarray
    bias: float
    hyperparams: Hyperparams
    user_ids: list[str] = field(default_factory=list)
    seed: int = 0
    converged: bool = False
    epochs_run: int = 0
    loss_history: list[float] = field(default_factory=list)


@dataclass
class EvalMetrics:
    precision: dict[str, float]
    recall: dict[str, float]
    f1: dict[str, float]
    support: dict[str, int]
    confusion: dict[str, int]  # tp/fp/fn/tn with misinfo as positive

    def as_dict(self) -> dict:
        return {
            "per_class": {
                cls: {
                    "precision": self.precision[cls],
                    "recall": self.recall[cls],
                    "f1": self.f1[cls],
                    "support": self.support[cls],
                }
                for cls in ("misinfo", "info")
            },
            "confusion": self.confusion,
        }


def dataset_from_matrix(
    matrix: SharingMatrix, labels: dict[str, tuple[str, str]]
) -> Dataset:
    """Build the sparse feature matrix from a filtered SharingMatrix,
    keeping only domains labeled misinfo or info."""
    user_index = {u: j for j, u in enumerate(matrix.users)}
    names, ys, rows, cols = [], [], [], []
    for domain in matrix.domains:
        label = labels.get(domain, ("none", ""))[0]
        if label not in ("misinfo", "info"):
            continue
        i = len(names)
        names.append(domain)
        ys.append(1 if label == "misinfo" else 0)
        for user in matrix.sharers[domain]:
            rows.append(i)
            cols.append(user_index[user])
    features = sp.csr_matrix(
        (np.ones(len(rows)), (rows, cols)),
        shape=(len(names), len(matrix.users)),
    )
    return Dataset(features, np.array(ys, dtype=int), names, list(matrix.users))


def split(
    dataset: Dataset,
    test_fraction: float = 0.25,
    seed: int = 0,
    stratified: bool = True,
) -> tuple[Dataset, Dataset]:
    """Disjoint, exhaustive train/test split; stratification keeps the class
    ratio within one example per class. Seed-deterministic."""
    n = len(dataset.labels)
    rng = random.Random(seed)
    if stratified and all(np.sum(dataset.labels == c) >= 2 for c in (0, 1)):
        test_idx: list[int] = []
        for cls in (0, 1):
            members = [i for i in range(n) if dataset.labels[i] == cls]
            rng.shuffle(members)
            k = round(len(members) * test_fraction)
            test_idx.extend(members[:k])
    else:
        order = list(range(n))
        rng.shuffle(order)
        test_idx = order[: round(n * test_fraction)]
    test_set = sorted(test_idx)
    train_set = [i for i in range(n) if i not in set(test_set)]
    return dataset.subset(train_set), dataset.subset(test_set)


def oversample(dataset: Dataset, seed: int = 0) -> Dataset:
    """Random oversampling with replacement of the minority class until the
    class counts are equal; majority rows untouched."""
    counts = {c: int(np.sum(dataset.labels == c)) for c in (0, 1)}
    if counts[0] == 0 or counts[1] == 0 or counts[0] == counts[1]:
        return dataset
    minority = min(counts, key=counts.get)
    deficit = abs(counts[0] - counts[1])
    pool = [i for i in range(len(dataset.labels)) if dataset.labels[i] == minority]
    rng = random.Random(seed)
    extra = [rng.choice(pool) for _ in range(deficit)]
    return dataset.subset(list(range(len(dataset.labels))) + extra)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_gradient(
    weights: np.ndarray,
    bias: float,
    features: sp.csr_matrix,
    labels: np.ndarray,
    l2_strength: float,
) -> tuple[float, np.ndarray, float]:
    """Mean binary cross-entropy plus (l2/2)·||w||² (bias unregularized),
    with its analytic gradient."""
    n = features.shape[0]
    margin = features @ weights + bias
    # log(1 + exp(m)) - y*m, computed stably
    loss = float(
        np.mean(np.logaddexp(0.0, margin) - labels * margin)
        + 0.5 * l2_strength * float(weights @ weights)
    )
    residual = _sigmoid(margin) - labels
    grad_w = features.T @ residual / n + l2_strength * weights
    grad_b = float(np.mean(residual))
    return loss, np.asarray(grad_w).ravel(), grad_b


def train(
    train_set: Dataset, hyperparams: Hyperparams, seed: int = 0
) -> ClassifierModel:
    """Full-batch gradient descent from the zero model.

    The step halves whenever a step would increase the loss, so the loss
    history is non-increasing. Stops on gradient norm below
    ``convergence_tol`` or after ``max_epochs``.
    """
    d = train_set.features.shape[1]
    weights = np.zeros(d)
    bias = 0.0
    lr = hyperparams.learning_rate
    loss, grad_w, grad_b = loss_and_gradient(
        weights, bias, train_set.features, train_set.labels, hyperparams.l2_strength
    )
    history = [loss]
    converged = False
    epoch = 0
    for epoch in range(1, hyperparams.max_epochs + 1):
        grad_norm = float(np.sqrt(grad_w @ grad_w + grad_b * grad_b))
        if grad_norm < hyperparams.convergence_tol:
            converged = True
            epoch -= 1
            break
        while True:
            new_w = weights - lr * grad_w
            new_b = bias - lr * grad_b
            new_loss, new_gw, new_gb = loss_and_gradient(
                new_w, new_b, train_set.features, train_set.labels,
                hyperparams.l2_strength,
            )
            if new_loss <= loss:
                break
            if lr < 1e-12:
                new_loss = None  # no admissible step left
                break
            lr /= 2.0
        if new_loss is None:
            epoch -= 1
            break
        weights, bias = new_w, new_b
        loss, grad_w, grad_b = new_loss, new_gw, new_gb
        history.append(loss)
    else:
        grad_norm = float(np.sqrt(grad_w @ grad_w + grad_b * grad_b))
        converged = grad_norm < hyperparams.convergence_tol
    return ClassifierModel(
        weights=weights,
        bias=bias,
        hyperparams=hyperparams,
        user_ids=list(train_set.user_ids),
        seed=seed,
        converged=converged,
        epochs_run=epoch,
        loss_history=history,
    )


def predict(model: ClassifierModel, features) -> np.ndarray:
    """Predicted misinfo probability, sigmoid(w·x + b), per row."""
    features = sp.csr_matrix(features)
    if features.shape[1] != model.weights.shape[0]:
        raise ValueError(
            f"feature dimension {features.shape[1]} does not match model "
            f"dimension {model.weights.shape[0]}"
        )
    return _sigmoid(np.asarray(features @ model.weights).ravel() + model.bias)


def evaluate(model: ClassifierModel, test_set: Dataset) -> EvalMetrics:
    """Threshold predicted probability at 0.5; per-class precision, recall,
    F1, and support, with misinfo as the positive class."""
    if len(test_set.labels) == 0:
        raise ValueError("test set is empty")
    predicted = (predict(model, test_set.features) >= 0.5).astype(int)
    actual = test_set.labels
    tp = int(np.sum((predicted == 1) & (actual == 1)))
    fp = int(np.sum((predicted == 1) & (actual == 0)))
    fn = int(np.sum((predicted == 0) & (actual == 1)))
    tn = int(np.sum((predicted == 0) & (actual == 0)))

    def prf(tp_, fp_, fn_):
        precision = tp_ / (tp_ + fp_) if tp_ + fp_ else 0.0
        recall = tp_ / (tp_ + fn_) if tp_ + fn_ else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        return precision, recall, f1

    p1, r1, f1_1 = prf(tp, fp, fn)
    p0, r0, f1_0 = prf(tn, fn, fp)
    return EvalMetrics(
        precision={"misinfo": p1, "info": p0},
        recall={"misinfo": r1, "info": r0},
        f1={"misinfo": f1_1, "info": f1_0},
        support={"misinfo": tp + fn, "info": tn + fp},
        confusion={"tp": tp, "fp": fp, "fn": fn, "tn": tn},
    )


def tune(
    dataset: Dataset,
    hyperparam_grid: list[Hyperparams],
    k_folds: int = 5,
    seed: int = 0,
) -> Hyperparams:
    """Pick the grid point maximizing mean misinfo-class F1 over k folds.

    Oversampling is applied inside each fold's training portion only. Ties
    break to stronger regularization.
    """
    if not hyperparam_grid:
        raise ValueError("hyperparameter grid is empty")
    n = len(dataset.labels)
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    folds = [sorted(order[i::k_folds]) for i in range(k_folds)]
    best: tuple[float, float] | None = None
    best_hp = hyperparam_grid[0]
    for hp in hyperparam_grid:
        scores = []
        for i, fold in enumerate(folds):
            if not fold:
                continue
            train_idx = [j for j in range(n) if j not in set(fold)]
            fold_train = oversample(dataset.subset(train_idx), seed=seed + i)
            fold_test = dataset.subset(fold)
            if len(set(fold_train.labels)) < 2 or len(fold_test.labels) == 0:
                continue
            model = train(fold_train, hp, seed=seed)
            scores.append(evaluate(model, fold_test).f1["misinfo"])
        mean_f1 = sum(scores) / len(scores) if scores else 0.0
        key = (mean_f1, hp.l2_strength)
        if best is None or key > best:
            best = key
            best_hp = hp
    return best_hp


def save_model(model: ClassifierModel, path: str | Path) -> None:
    nonzero = np.nonzero(model.weights)[0]
    payload = {
        "weights": {str(int(i)): float(model.weights[i]) for i in nonzero},
        "bias": model.bias,
        "hyperparams": {
            "l2_strength": model.hyperparams.l2_strength,
            "learning_rate": model.hyperparams.learning_rate,
            "max_epochs": model.hyperparams.max_epochs,
            "convergence_tol": model.hyperparams.convergence_tol,
        },
        "feature_space": model.user_ids,
        "seed": model.seed,
        "converged": model.converged,
        "epochs_run": model.epochs_run,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path: str | Path) -> ClassifierModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    user_ids = payload["feature_space"]
    weights = np.zeros(len(user_ids))
    for index, value in payload["weights"].items():
        weights[int(index)] = value
    return ClassifierModel(
        weights=weights,
        bias=payload["bias"],
        hyperparams=Hyperparams(**payload["hyperparams"]),
        user_ids=user_ids,
        seed=payload.get("seed", 0),
        converged=payload.get("converged", False),
        epochs_run=payload.get("epochs_run", 0),
    )
