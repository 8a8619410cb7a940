"""Classical baselines over the mean-pooled module embeddings."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from sklearn.linear_model import LogisticRegression
from sklearn.neural_network import MLPClassifier
from sklearn.preprocessing import StandardScaler

from .data import Dataset, SplitManifest, feature_matrix, labels, load_dataset, load_split
from .metrics import confusion


@dataclass(frozen=True)
class TrainRun:
    model_kind: str  # logistic_regression | mlp | encoder_finetune
    dataset_path: str
    split_path: str
    seed: int = 0
    hyperparameters: dict = field(default_factory=dict)


@dataclass
class RunResult:
    run: TrainRun
    metrics: dict
    predictions: dict[str, int]
    scores: dict[str, float]
    train_seconds: float
    inference_seconds: float
    extras: dict = field(default_factory=dict)


def _splits(dataset: Dataset, manifest: SplitManifest):
    by_id = dataset.by_id()
    parts = {}
    for name in ("train", "val", "test"):
        parts[name] = [by_id[i] for i in manifest.ids(name) if i in by_id]
    return parts


def _fit_candidates(kind: str, run: TrainRun):
    if kind == "logistic_regression":
        grid = run.hyperparameters.get("C_grid", (0.03, 0.3, 3.0))
        return [
            LogisticRegression(C=c, max_iter=2000, random_state=run.seed) for c in grid
        ]
    if kind == "mlp":
        widths = run.hyperparameters.get("widths", (32, 64))
        return [
            MLPClassifier(
                hidden_layer_sizes=(w,),
                max_iter=600,
                random_state=run.seed,
                learning_rate_init=1e-3,
            )
            for w in widths
        ]
    raise ValueError(f"unknown baseline kind {kind!r}")


def train_baseline(run: TrainRun) -> RunResult:
    """Fit on train, pick the candidate with the best validation accuracy,
    report test metrics in the interchange schema."""
    dataset = load_dataset(run.dataset_path)
    manifest = load_split(run.split_path)
    parts = _splits(dataset, manifest)

    scaler = StandardScaler()
    x_train = scaler.fit_transform(feature_matrix(parts["train"]))
    y_train = labels(parts["train"])
    x_val = scaler.transform(feature_matrix(parts["val"]))
    y_val = labels(parts["val"])
    x_test = scaler.transform(feature_matrix(parts["test"]))

    start = time.perf_counter()
    best_model, best_val = None, -1.0
    for model in _fit_candidates(run.model_kind, run):
        model.fit(x_train, y_train)
        val_acc = float((model.predict(x_val) == y_val).mean()) if len(y_val) else 0.0
        if val_acc > best_val:
            best_model, best_val = model, val_acc
    train_seconds = time.perf_counter() - start

    start = time.perf_counter()
    predicted = best_model.predict(x_test)
    proba = best_model.predict_proba(x_test)[:, 1]
    inference_seconds = time.perf_counter() - start

    predictions = {r.id: int(p) for r, p in zip(parts["test"], predicted)}
    scores = {r.id: float(s) for r, s in zip(parts["test"], proba)}
    return RunResult(
        run=run,
        metrics=confusion(parts["test"], predictions),
        predictions=predictions,
        scores=scores,
        train_seconds=train_seconds,
        inference_seconds=inference_seconds,
        extras={"val_accuracy": best_val},
    )
