"""Learning-based consistency classification over exported datasets:
classical baselines on pooled embeddings plus a small locally pretrained
encoder fine-tuned with a mean-of-logits head."""

__version__ = "0.1.0"

from .baselines import RunResult, TrainRun, train_baseline
from .data import (
    Dataset,
    Record,
    SchemaMismatchError,
    SplitManifest,
    load_dataset,
    load_embedding_table,
    load_split,
)
from .encoder import EncoderConfig, finetune_encoder, pretrain
from .metrics import confusion, write_metrics, write_predictions
from .report import summarize, to_markdown, write_report
