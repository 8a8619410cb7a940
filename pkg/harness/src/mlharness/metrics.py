"""Metrics in the corpus interchange schema, recomputed independently here.

Positive class is "inconsistent" (label 1). The JSON shape matches the
corpus evaluator exactly, so the two can be diffed bit for bit on the same
predictions.
"""

from __future__ import annotations

import json
from pathlib import Path


def confusion(records, predictions: dict[str, int]) -> dict:
    tp = fp = tn = fn = 0
    pattern_total: dict[str, int] = {}
    pattern_hit: dict[str, int] = {}
    for record in records:
        pred = int(predictions[record.id])
        if record.label == 1:
            name = record.pattern or "?"
            pattern_total[name] = pattern_total.get(name, 0) + 1
            if pred == 1:
                tp += 1
                pattern_hit[name] = pattern_hit.get(name, 0) + 1
            else:
                fn += 1
        elif pred == 1:
            fp += 1
        else:
            tn += 1
    total = tp + fp + tn + fn
    return {
        "tp": tp,
        "fp": fp,
        "tn": tn,
        "fn": fn,
        "accuracy": (tp + tn) / total if total else 0.0,
        "precision": tp / (tp + fp) if (tp + fp) else None,
        "recall": tp / (tp + fn) if (tp + fn) else None,
        "per_pattern": {
            name: pattern_hit.get(name, 0) / pattern_total[name]
            for name in sorted(pattern_total)
        },
    }


def write_metrics(metrics: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(metrics, indent=2, sort_keys=True) + "\n")


def write_predictions(predictions: dict[str, int], scores: dict[str, float], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record_id in sorted(predictions):
            fh.write(
                json.dumps(
                    {
                        "id": record_id,
                        "pred": int(predictions[record_id]),
                        "score": float(scores.get(record_id, predictions[record_id])),
                    }
                )
                + "\n"
            )
