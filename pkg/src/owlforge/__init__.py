"""Toolkit for building and verifying consistency-checking corpora of OWL
ontology modules: a Manchester-syntax front end, a tableau reasoner with an
exhaustive finite-model oracle, anti-pattern detection and injection,
modularization, English-triple translation, graph embeddings, and dataset
assembly."""

__version__ = "0.1.0"

from .antipattern import (
    AntiPatternId,
    FAMILIES,
    InjectionReport,
    MatchBinding,
    PatternTemplate,
    detect,
    find_injection_sites,
    inject,
    minimal_fixture,
    templates,
)
from .corpus import (
    DatasetRecord,
    Metrics,
    SplitManifest,
    SynthConfig,
    build_dataset,
    evaluate,
    generate_synthetic,
    leave_family_out,
    split,
    time_harness,
)
from .embed import (
    EmbeddingTable,
    TrainConfig,
    embed_ontology,
    mean_pool,
    project,
    random_walks,
    train_skipgram,
)
from .finitemodel import FiniteModel, finite_model_search, oracle_classify_status
from .manchester import ParseError, parse, serialize
from .model import (
    ConsistentCoherent,
    EntityName,
    Incoherent,
    Inconsistent,
    Ontology,
    nnf,
    partition_abox_tbox_rbox,
    signature_of,
)
from .modularize import modularize_ontology, rank_concepts
from .tableau import Verdict, check_consistency, classify_status, is_class_satisfiable
from .translate import TripleDoc, estimate_tokens, to_levi, to_text, to_triples
