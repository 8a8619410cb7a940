"""Corpus provisioning for the harness tests.

The desk corpus is produced by the corpus builder's command line (the only
interface this package talks to) once per session.
"""

import subprocess
import sys
from pathlib import Path

import pytest

SEED = 53
N_MODULES = 400


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("corpus")
    subprocess.run(
        [
            sys.executable,
            "-m",
            "owlforge.cli",
            "pipeline",
            "--seed", str(SEED),
            "--n", str(N_MODULES),
            "--classes", "5", "9",
            "--properties", "2", "3",
            "--individuals", "1", "3",
            "--embed-dim", "56",
            "--out", str(out),
        ],
        check=True,
        capture_output=True,
    )
    return out


@pytest.fixture(scope="session")
def dataset_path(corpus_dir) -> str:
    return str(corpus_dir / "dataset.jsonl")


@pytest.fixture(scope="session")
def split_path(corpus_dir) -> str:
    return str(corpus_dir / "splits" / "base.json")


@pytest.fixture(scope="session")
def checkpoint_path(corpus_dir, dataset_path, split_path) -> str:
    from mlharness import load_dataset, load_split, pretrain
    from mlharness.encoder import EncoderConfig

    data = load_dataset(dataset_path)
    manifest = load_split(split_path)
    train_ids = set(manifest.ids("train"))
    texts = [r.text for r in data.records if r.id in train_ids]
    path = corpus_dir / "encoder.pt"
    pretrain(
        texts,
        path,
        EncoderConfig(dim=64, heads=4, layers=2, feedforward=128, max_len=384),
        epochs=4,
        seed=0,
    )
    return str(path)
