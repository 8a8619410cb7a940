"""Readers for the corpus interchange files.

The harness never touches raw ontologies: it consumes the dataset JSONL
(one record per module with text, triples, token count, label, pattern,
status, and a pooled embedding), the split manifest JSON, and optionally a
binary embedding table. These formats are the whole contract with the
corpus builder.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

REQUIRED_KEYS = {"id", "triples", "text", "tokens", "label", "pattern"}
KNOWN_META_SCHEMAS = {"owlforge/dataset-meta/v1"}


class SchemaMismatchError(ValueError):
    """The dataset files do not match a known interchange version."""


@dataclass(frozen=True)
class Record:
    id: str
    text: str
    tokens: int
    label: int
    pattern: str | None
    status: str | None
    embedding: np.ndarray | None


@dataclass(frozen=True)
class Dataset:
    records: tuple[Record, ...]

    def by_id(self) -> dict[str, Record]:
        return {r.id: r for r in self.records}

    def subset(self, ids) -> list[Record]:
        wanted = set(ids)
        return [r for r in self.records if r.id in wanted]


def load_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    meta_path = path.with_suffix(".meta.json")
    if meta_path.exists():
        schema = json.loads(meta_path.read_text()).get("schema")
        if schema not in KNOWN_META_SCHEMAS:
            raise SchemaMismatchError(f"unknown dataset schema {schema!r}")
    records = []
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        data = json.loads(line)
        missing = REQUIRED_KEYS - set(data)
        if missing:
            raise SchemaMismatchError(f"line {line_no} lacks keys {sorted(missing)}")
        embedding = data.get("embedding")
        records.append(
            Record(
                id=data["id"],
                text=data["text"],
                tokens=int(data["tokens"]),
                label=int(data["label"]),
                pattern=data.get("pattern"),
                status=data.get("status"),
                embedding=np.asarray(embedding, dtype=np.float64)
                if embedding is not None
                else None,
            )
        )
    return Dataset(tuple(records))


@dataclass(frozen=True)
class SplitManifest:
    ratios: tuple[int, ...]
    seed: int
    assignment: dict[str, str]
    excluded_family: str | None

    def ids(self, split: str) -> list[str]:
        return sorted(i for i, s in self.assignment.items() if s == split)


def load_split(path: str | Path) -> SplitManifest:
    data = json.loads(Path(path).read_text())
    for key in ("ratios", "seed", "assignment"):
        if key not in data:
            raise SchemaMismatchError(f"split manifest lacks {key!r}")
    return SplitManifest(
        ratios=tuple(data["ratios"]),
        seed=int(data["seed"]),
        assignment=dict(data["assignment"]),
        excluded_family=data.get("excluded_family"),
    )


def load_embedding_table(path: str | Path) -> tuple[dict[str, np.ndarray], int]:
    """Reader for the binary table: a JSON header line, then records of a
    2-byte little-endian name length, the UTF-8 token, and dim float32s."""
    with open(path, "rb") as fh:
        header = json.loads(fh.readline())
        dim = int(header["dim"])
        vocab_size = int(header["vocab_size"])
        table: dict[str, np.ndarray] = {}
        for _ in range(vocab_size):
            (length,) = struct.unpack("<H", fh.read(2))
            token = fh.read(length).decode()
            table[token] = np.frombuffer(fh.read(4 * dim), dtype="<f4").astype(np.float64)
    return table, dim


def feature_matrix(records) -> np.ndarray:
    """Stack pooled embeddings; every record must carry one."""
    missing = [r.id for r in records if r.embedding is None]
    if missing:
        raise SchemaMismatchError(f"records lack pooled embeddings: {missing[:3]}...")
    return np.stack([r.embedding for r in records])


def labels(records) -> np.ndarray:
    return np.asarray([r.label for r in records], dtype=np.int64)
