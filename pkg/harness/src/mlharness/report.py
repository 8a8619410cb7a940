"""Cross-run comparison tables: JSON plus markdown, mean and standard
deviation over seeds, with training and inference wall-time columns."""

from __future__ import annotations

import json
import statistics
from pathlib import Path


def _mean_sd(values):
    values = [v for v in values if v is not None]
    if not values:
        return None, None
    if len(values) == 1:
        return values[0], 0.0
    return statistics.mean(values), statistics.stdev(values)


def summarize(runs) -> dict:
    """Group RunResults by model kind; aggregate metrics over seeds."""
    if not runs:
        raise ValueError("at least one completed run is required")
    grouped: dict[str, list] = {}
    for result in runs:
        grouped.setdefault(result.run.model_kind, []).append(result)
    rows = []
    for kind in sorted(grouped):
        results = grouped[kind]
        row = {"model": kind, "seeds": len(results)}
        for metric in ("accuracy", "precision", "recall"):
            mean, sd = _mean_sd([r.metrics[metric] for r in results])
            row[metric] = mean
            row[f"{metric}_sd"] = sd
        row["train_seconds"] = sum(r.train_seconds for r in results) / len(results)
        row["inference_seconds"] = sum(r.inference_seconds for r in results) / len(results)
        rows.append(row)
    return {"schema": "mlharness/report/v1", "rows": rows}


def to_markdown(report: dict) -> str:
    header = (
        "| Model | Seeds | Accuracy | Precision | Recall | Training (s) | Inference (s) |\n"
        "|-------|------:|----------|-----------|--------|-------------:|--------------:|\n"
    )

    def cell(row, metric):
        value, sd = row[metric], row[f"{metric}_sd"]
        if value is None:
            return "-"
        return f"{value:.4f} ({sd:.4f})"

    lines = [
        f"| {row['model']} | {row['seeds']} | {cell(row, 'accuracy')} "
        f"| {cell(row, 'precision')} | {cell(row, 'recall')} "
        f"| {row['train_seconds']:.2f} | {row['inference_seconds']:.2f} |"
        for row in report["rows"]
    ]
    return header + "\n".join(lines) + "\n"


def write_report(runs, json_path: str | Path, markdown_path: str | Path) -> dict:
    report = summarize(runs)
    Path(json_path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    Path(markdown_path).write_text(to_markdown(report))
    return report
