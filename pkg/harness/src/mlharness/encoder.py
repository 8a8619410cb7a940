"""A small pretrained text encoder fine-tuned for consistency classification.

No external checkpoints are downloadable in the build environment, so
"pretrained" means: a compact transformer encoder pretrained here with a
masked-token objective on the training-split texts, saved and pinned by
sha256. Fine-tuning loads the pinned checkpoint, attaches a per-token
two-way head, and classifies with the mean of all token logits.

Records longer than the configured maximum sequence length are skipped and
counted, never truncated silently.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from .baselines import RunResult, TrainRun, _splits
from .data import load_dataset, load_split
from .metrics import confusion

PAD, UNK, MASK = "[PAD]", "[UNK]", "[MASK]"


@dataclass(frozen=True)
class EncoderConfig:
    dim: int = 64
    heads: int = 4
    layers: int = 2
    feedforward: int = 128
    max_len: int = 384
    vocab_limit: int = 4000


class Vocab:
    def __init__(self, tokens: list[str]):
        self.itos = [PAD, UNK, MASK] + tokens
        self.stoi = {t: i for i, t in enumerate(self.itos)}

    @classmethod
    def build(cls, texts, limit: int) -> "Vocab":
        counts: dict[str, int] = {}
        for text in texts:
            for token in text.split():
                counts[token] = counts.get(token, 0) + 1
        ordered = sorted(counts, key=lambda t: (-counts[t], t))[:limit]
        return cls(ordered)

    def encode(self, text: str) -> list[int]:
        unk = self.stoi[UNK]
        return [self.stoi.get(t, unk) for t in text.split()]

    def __len__(self):
        return len(self.itos)


class TextEncoder(nn.Module):
    def __init__(self, vocab_size: int, cfg: EncoderConfig):
        super().__init__()
        self.cfg = cfg
        self.embed = nn.Embedding(vocab_size, cfg.dim, padding_idx=0)
        self.position = nn.Embedding(cfg.max_len, cfg.dim)
        layer = nn.TransformerEncoderLayer(
            d_model=cfg.dim,
            nhead=cfg.heads,
            dim_feedforward=cfg.feedforward,
            batch_first=True,
            dropout=0.1,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=cfg.layers)

    def forward(self, ids: torch.Tensor) -> torch.Tensor:
        positions = torch.arange(ids.shape[1], device=ids.device).unsqueeze(0)
        hidden = self.embed(ids) + self.position(positions)
        return self.encoder(hidden, src_key_padding_mask=ids.eq(0))


def _batches(sequences, batch_size, max_len, generator=None):
    order = torch.randperm(len(sequences), generator=generator).tolist()
    for start in range(0, len(order), batch_size):
        chunk = [sequences[i] for i in order[start : start + batch_size]]
        width = min(max(len(ids) for ids, *_ in chunk), max_len)
        ids = torch.zeros((len(chunk), width), dtype=torch.long)
        for row, (seq, *_rest) in enumerate(chunk):
            ids[row, : len(seq)] = torch.tensor(seq[:width])
        yield ids, chunk


def pretrain(
    texts: list[str],
    out_path: str | Path,
    cfg: EncoderConfig = EncoderConfig(),
    epochs: int = 3,
    seed: int = 0,
    batch_size: int = 16,
) -> str:
    """Masked-token pretraining; returns the checkpoint's sha256 pin."""
    torch.manual_seed(seed)
    vocab = Vocab.build(texts, cfg.vocab_limit)
    model = TextEncoder(len(vocab), cfg)
    head = nn.Linear(cfg.dim, len(vocab))
    optimizer = torch.optim.Adam(
        list(model.parameters()) + list(head.parameters()), lr=3e-4
    )
    sequences = [(vocab.encode(t)[: cfg.max_len],) for t in texts if t.split()]
    generator = torch.Generator().manual_seed(seed)
    model.train()
    for _ in range(epochs):
        for ids, _chunk in _batches(sequences, batch_size, cfg.max_len, generator):
            mask = (torch.rand(ids.shape, generator=generator) < 0.15) & ids.ne(0)
            if not mask.any():
                continue
            corrupted = ids.clone()
            corrupted[mask] = 2  # [MASK]
            logits = head(model(corrupted))
            loss = nn.functional.cross_entropy(
                logits[mask], ids[mask], reduction="mean"
            )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()

    payload = {
        "config": cfg.__dict__,
        "vocab": vocab.itos,
        "state": model.state_dict(),
    }
    out_path = Path(out_path)
    torch.save(payload, out_path)
    digest = hashlib.sha256(out_path.read_bytes()).hexdigest()
    out_path.with_suffix(".sha256").write_text(digest + "\n")
    return digest


def _load_checkpoint(path: str | Path, expected_sha: str | None):
    path = Path(path)
    if expected_sha is None:
        pin = path.with_suffix(".sha256")
        expected_sha = pin.read_text().strip() if pin.exists() else None
    if expected_sha is not None:
        actual = hashlib.sha256(path.read_bytes()).hexdigest()
        if actual != expected_sha:
            raise ValueError(f"checkpoint hash mismatch: {actual} != {expected_sha}")
    payload = torch.load(path, weights_only=False)
    cfg = EncoderConfig(**payload["config"])
    vocab = Vocab([])
    vocab.itos = payload["vocab"]
    vocab.stoi = {t: i for i, t in enumerate(vocab.itos)}
    model = TextEncoder(len(vocab), cfg)
    model.load_state_dict(payload["state"])
    return model, vocab, cfg


class MeanLogitsClassifier(nn.Module):
    """Per-token two-way logits averaged over real tokens."""

    def __init__(self, encoder: TextEncoder, dim: int):
        super().__init__()
        self.encoder = encoder
        self.head = nn.Linear(dim, 2)

    def forward(self, ids: torch.Tensor) -> torch.Tensor:
        hidden = self.encoder(ids)
        token_logits = self.head(hidden)
        keep = ids.ne(0).unsqueeze(-1)
        summed = (token_logits * keep).sum(dim=1)
        counts = keep.sum(dim=1).clamp(min=1)
        return summed / counts


def finetune_encoder(
    run: TrainRun,
    checkpoint: str | Path,
    expected_sha: str | None = None,
    epochs: int = 12,
    batch_size: int = 16,
    lr: float = 7e-4,
) -> RunResult:
    """Fine-tune the pinned encoder; epoch selection on the validation split,
    metrics on test. Overlong records are skipped and counted."""
    torch.manual_seed(run.seed)
    dataset = load_dataset(run.dataset_path)
    manifest = load_split(run.split_path)
    parts = _splits(dataset, manifest)
    model_encoder, vocab, cfg = _load_checkpoint(checkpoint, expected_sha)
    model = MeanLogitsClassifier(model_encoder, cfg.dim)
    optimizer = torch.optim.AdamW(model.parameters(), lr=lr, weight_decay=5e-4)

    skipped = {"train": 0, "val": 0, "test": 0}

    def encode_part(name):
        out = []
        for record in parts[name]:
            ids = vocab.encode(record.text)
            if len(ids) > cfg.max_len:
                skipped[name] += 1
                continue
            out.append((ids, record))
        return out

    # id order keeps each base module adjacent to its injected sibling, so
    # batches contrast near-duplicate pairs that differ only in the
    # completed pattern
    train_seqs = sorted(encode_part("train"), key=lambda item: item[1].id)
    val_seqs = encode_part("val")
    test_seqs = encode_part("test")

    # optional positive-class loss weight; off unless configured
    weight = run.hyperparameters.get("positive_class_weight")
    class_weights = (
        torch.tensor([1.0, float(weight)]) if weight is not None else None
    )

    @torch.no_grad()
    def evaluate_on(seqs):
        model.eval()
        predictions, scores = {}, {}
        for start in range(0, len(seqs), batch_size):
            chunk = seqs[start : start + batch_size]
            width = max(len(ids) for ids, _ in chunk)
            ids = torch.zeros((len(chunk), width), dtype=torch.long)
            for row, (seq, _) in enumerate(chunk):
                ids[row, : len(seq)] = torch.tensor(seq)
            probs = torch.softmax(model(ids), dim=-1)[:, 1]
            for (_, record), p in zip(chunk, probs.tolist()):
                predictions[record.id] = int(p >= 0.5)
                scores[record.id] = float(p)
        return predictions, scores

    def sequential_batches(seqs):
        for start in range(0, len(seqs), batch_size):
            chunk = seqs[start : start + batch_size]
            width = min(max(len(s) for s, _ in chunk), cfg.max_len)
            ids = torch.zeros((len(chunk), width), dtype=torch.long)
            for row, (seq, _) in enumerate(chunk):
                ids[row, : len(seq)] = torch.tensor(seq[:width])
            yield ids, chunk

    best_state, best_val = None, -1.0
    start_time = time.perf_counter()
    for _ in range(epochs):
        model.train()
        for ids, chunk in sequential_batches(train_seqs):
            targets = torch.tensor([record.label for _, record in chunk])
            loss = nn.functional.cross_entropy(model(ids), targets, weight=class_weights)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
        val_preds, _ = evaluate_on(val_seqs)
        val_acc = (
            float(
                np.mean([val_preds[r.id] == r.label for _, r in val_seqs])
            )
            if val_seqs
            else 0.0
        )
        if val_acc > best_val:
            best_val = val_acc
            best_state = {k: v.clone() for k, v in model.state_dict().items()}
    train_seconds = time.perf_counter() - start_time

    if best_state is not None:
        model.load_state_dict(best_state)
    start_time = time.perf_counter()
    predictions, scores = evaluate_on(test_seqs)
    inference_seconds = time.perf_counter() - start_time

    test_records = [record for _, record in test_seqs]
    return RunResult(
        run=run,
        metrics=confusion(test_records, predictions),
        predictions=predictions,
        scores=scores,
        train_seconds=train_seconds,
        inference_seconds=inference_seconds,
        extras={"val_accuracy": best_val, "skipped": skipped},
    )
