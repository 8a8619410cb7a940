"""Command-line entry point.

Subcommands: gen, check, inject, modularize, translate, embed,
build-dataset, eval, fetch, pipeline. Every JSON artifact carries a
versioned "schema" field plus tool version, seed, and a hash of the
resolved configuration; ontology files carry the same provenance as a
comment header. Exit codes: 0 success, 1 domain error, 2 usage error.

The pipeline subcommand is a pure function of its inputs and flags: two
runs with the same seed produce byte-identical dataset, split, and metrics
files (timing reports are the one exception, being wall-clock
measurements).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .antipattern import (
    AntiPatternId,
    FAMILIES,
    NoSiteError,
    fixture_file_name,
    inject,
    minimal_fixture,
)
from .corpus import (
    GenerationBudgetExceededError,
    MissingPredictionError,
    SynthConfig,
    UnknownFamilyError,
    build_dataset,
    derive_seed,
    evaluate,
    generate_synthetic,
    inject_corpus,
    leave_family_out,
    merge_timing_reports,
    split as split_records,
    time_harness,
)
from .embed import (
    TrainConfig,
    WalkCorpus,
    embed_ontology,
    mean_pool,
    project,
    random_walks,
    save_table,
    save_table_jsonl,
    structure_tokens,
    train_skipgram,
)
from .fetch import AuthError, HttpError, fetch as fetch_ontologies
from .finitemodel import BudgetExceededError
from .manchester import ParseError, parse, serialize
from .model import Incoherent, Inconsistent, Ontology, status_tag
from .modularize import InsufficientConceptsError, modularize_ontology
from .tableau import (
    UnknownClassError,
    UnsupportedAxiomError,
    check_consistency,
    classify_status,
)
from .translate import (
    DEFAULT_TOKEN_BUDGET,
    doc_from_json_dict,
    doc_to_json_dict,
    levi_to_json_dict,
    to_levi,
    to_triples,
)

_DOMAIN_ERRORS = (
    ParseError,
    UnsupportedAxiomError,
    UnknownClassError,
    NoSiteError,
    UnknownFamilyError,
    MissingPredictionError,
    GenerationBudgetExceededError,
    BudgetExceededError,
    InsufficientConceptsError,
    AuthError,
    HttpError,
    FileNotFoundError,
    ValueError,
    KeyError,
)


def _config_hash(args: argparse.Namespace) -> str:
    payload = {k: v for k, v in vars(args).items() if k != "func"}
    text = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _provenance(args: argparse.Namespace, schema: str) -> dict:
    return {
        "schema": f"owlforge/{schema}/v1",
        "tool_version": __version__,
        "seed": getattr(args, "seed", None),
        "config_hash": _config_hash(args),
    }


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _omn_header(args: argparse.Namespace) -> str:
    return (
        f"# owlforge {__version__} seed={getattr(args, 'seed', None)} "
        f"config={_config_hash(args)}\n"
    )


def _write_omn(path: Path, ontology: Ontology, args: argparse.Namespace) -> None:
    path.write_text(_omn_header(args) + serialize(ontology))


def _load_ontology(path: str) -> Ontology:
    return parse(Path(path).read_text(), ontology_id=Path(path).stem)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_gen(args: argparse.Namespace) -> int:
    cfg = SynthConfig(
        n_ontologies=args.n,
        classes=tuple(args.classes),
        properties=tuple(args.properties),
        individuals=tuple(args.individuals),
        disjointness_density=args.disjoint_density,
        seed=args.seed,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ontologies = generate_synthetic(cfg)
    for ontology in ontologies:
        _write_omn(out / f"{ontology.id}.omn", ontology, args)
    _emit(
        _provenance(args, "gen-manifest")
        | {"count": len(ontologies), "ids": [o.id for o in ontologies]},
        args.manifest,
    )
    return 0


def _cmd_fixtures(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for pattern in AntiPatternId:
        fixture = minimal_fixture(pattern)
        (out / fixture_file_name(pattern)).write_text(serialize(fixture))
        names.append(fixture_file_name(pattern))
    _emit(_provenance(args, "fixtures") | {"files": names}, None)
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    ontology = _load_ontology(args.input)
    start = time.perf_counter()
    verdict = check_consistency(ontology)
    payload: dict = {"id": ontology.id}
    if isinstance(verdict.status, Inconsistent):
        payload["status"] = "inconsistent"
        payload["unsat_classes"] = []
        payload["clash_trace"] = [
            [entry.rule, entry.node, entry.detail] for entry in verdict.witness
        ]
    else:
        status = classify_status(ontology)
        payload["status"] = status_tag(status)
        payload["unsat_classes"] = (
            [c.local for c in status.unsatisfiable] if isinstance(status, Incoherent) else []
        )
    payload["wall_time_ms"] = (time.perf_counter() - start) * 1000.0
    _emit(_provenance(args, "check") | payload, args.out)
    return 0


def _cmd_inject(args: argparse.Namespace) -> int:
    ontology = _load_ontology(args.input)
    pattern = AntiPatternId(args.pattern)
    modified, report = inject(ontology, pattern, args.seed, max_missing=args.max_missing)
    out_file = Path(args.out_dir or ".") / f"{ontology.id}-{pattern.value.lower()}.omn"
    Path(args.out_dir or ".").mkdir(parents=True, exist_ok=True)
    _write_omn(out_file, modified, args)
    from .translate import axiom_to_triple

    rendered = []
    for axiom in report.injected_axioms:
        triple = axiom_to_triple(axiom)
        rendered.append(f"{triple.subject} {triple.relation} {triple.object}")
    _emit(
        _provenance(args, "injection-report")
        | {
            "pattern": pattern.value,
            "source_module": report.source_module,
            "output_file": str(out_file),
            "injected_axioms": rendered,
            "binding": {v: e.local for v, e in report.binding.substitution},
        },
        args.out,
    )
    return 0


def _cmd_modularize(args: argparse.Namespace) -> int:
    ontology = _load_ontology(args.input)
    modules, coverage = modularize_ontology(
        ontology, k=args.k, min_module_classes=args.min_module_classes
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for result in modules:
        path = out / f"{result.module.id}.omn"
        _write_omn(path, result.module, args)
        files.append(
            {"id": result.module.id, "file": path.name, "head": result.head.local}
        )
    _emit(
        _provenance(args, "modularize-manifest")
        | {
            "source": ontology.id,
            "modules": files,
            "dropped_axioms": len(coverage.dropped),
            "total_axioms": coverage.total_axioms,
        },
        args.manifest,
    )
    return 0


def _cmd_translate(args: argparse.Namespace) -> int:
    paths: list[Path] = []
    for item in args.inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.omn")))
        else:
            paths.append(p)
    levi_dir = Path(args.levi) if args.levi else None
    if levi_dir:
        levi_dir.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", encoding="utf-8") as fh:
        for path in paths:
            ontology = parse(path.read_text(), ontology_id=path.stem)
            doc = to_triples(ontology)
            fh.write(json.dumps(doc_to_json_dict(doc), sort_keys=True) + "\n")
            if levi_dir:
                (levi_dir / f"{ontology.id}.levi.json").write_text(
                    json.dumps(levi_to_json_dict(to_levi(doc)), sort_keys=True) + "\n"
                )
    _emit(_provenance(args, "translate-meta") | {"documents": len(paths)}, args.meta)
    return 0


def _cmd_embed(args: argparse.Namespace) -> int:
    ontology = _load_ontology(args.input)
    cfg = TrainConfig(
        dim=args.dim,
        window=args.window,
        epochs=args.epochs,
        negatives=args.negatives,
        seed=args.seed,
    )
    table = embed_ontology(ontology, cfg, walks_per_node=args.walks, depth=args.depth)
    save_table(table, args.out)
    if args.jsonl:
        save_table_jsonl(table, args.jsonl)
    pooled, oov = mean_pool(structure_tokens(ontology), table)
    _emit(
        _provenance(args, "embed-meta")
        | {
            "vocab_size": len(table.tokens),
            "dim": table.dim,
            "epoch_losses": list(table.epoch_losses),
            "pooled_oov": oov,
            "pooled_norm": float((pooled**2).sum() ** 0.5),
        },
        args.meta,
    )
    return 0


def _read_docs_jsonl(path: str):
    docs = []
    statuses = {}
    embeddings = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            data = json.loads(line)
            docs.append(doc_from_json_dict(data))
            if data.get("status") is not None:
                statuses[data["id"]] = data["status"]
            if data.get("embedding") is not None:
                embeddings[data["id"]] = data["embedding"]
    return docs, statuses, embeddings


def _record_to_json_dict(record) -> dict:
    base = doc_to_json_dict(record.doc)
    base["label"] = record.label
    base["pattern"] = record.pattern.value if record.pattern else None
    status = record.semantic_status
    base["status"] = (
        status if isinstance(status, str) else status_tag(status) if status is not None else None
    )
    base["embedding"] = list(record.embedding) if record.embedding is not None else None
    return base


def _write_dataset(records, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(_record_to_json_dict(record), sort_keys=True) + "\n")


def _manifest_json(manifest) -> dict:
    return {
        "ratios": list(manifest.ratios),
        "seed": manifest.seed,
        "assignment": dict(sorted(manifest.assignment.items())),
        "excluded_family": manifest.excluded_family,
    }


def _cmd_build_dataset(args: argparse.Namespace) -> int:
    cons_docs, cons_status, cons_emb = _read_docs_jsonl(args.consistent)
    incons_docs, incons_status, incons_emb = _read_docs_jsonl(args.inconsistent)
    statuses = {**cons_status, **incons_status}
    records = build_dataset(
        cons_docs,
        incons_docs,
        args.budget,
        statuses={k: v for k, v in statuses.items()} or None,
        embeddings={**cons_emb, **incons_emb} or None,
        seed=args.seed,
    )
    _write_dataset(records, args.out)
    meta = _provenance(args, "dataset-meta") | {
        "records": len(records),
        "consistent": sum(1 for r in records if r.label == 0),
        "inconsistent": sum(1 for r in records if r.label == 1),
    }
    if args.split_dir:
        split_dir = Path(args.split_dir)
        split_dir.mkdir(parents=True, exist_ok=True)
        base = split_records(records, tuple(args.ratios), args.seed)
        (split_dir / "base.json").write_text(
            json.dumps(_manifest_json(base), indent=2, sort_keys=True) + "\n"
        )
        if args.leave_family_out:
            for family in FAMILIES:
                manifest = leave_family_out(records, family, tuple(args.ratios), args.seed)
                name = family.replace("*", "star").lower()
                (split_dir / f"loo_{name}.json").write_text(
                    json.dumps(_manifest_json(manifest), indent=2, sort_keys=True) + "\n"
                )
    _emit(meta, args.meta)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    docs, statuses, _ = _read_docs_jsonl(args.dataset)
    from .corpus import DatasetRecord

    records = []
    for doc in docs:
        label = 1 if doc.pattern else 0
        records.append(
            DatasetRecord(
                id=doc.module_id,
                doc=doc,
                label=label,
                pattern=AntiPatternId(doc.pattern) if doc.pattern else None,
            )
        )
    predictions = {}
    with open(args.predictions, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                data = json.loads(line)
                predictions[data["id"]] = int(data["pred"])
    metrics = evaluate(predictions, records)
    _emit(_provenance(args, "metrics") | metrics.to_json_dict(), args.out)
    return 0


def _cmd_fetch(args: argparse.Namespace) -> int:
    manifest = fetch_ontologies(args.endpoint, args.out, api_key=args.api_key)
    _emit(_provenance(args, "fetch") | {"fetched": len(manifest["fetched"])}, None)
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    out = Path(args.out)
    (out / "modules").mkdir(parents=True, exist_ok=True)
    cfg = SynthConfig(
        n_ontologies=args.n,
        classes=tuple(args.classes),
        properties=tuple(args.properties),
        individuals=tuple(args.individuals),
        seed=args.seed,
    )

    ontologies = generate_synthetic(cfg)
    injected = inject_corpus(ontologies, seed=args.seed)

    statuses = {o.id: classify_status(o) for o in ontologies}
    statuses.update({o.id: classify_status(o) for o, _ in injected})

    cons_docs = []
    for ontology in ontologies:
        _write_omn(out / "modules" / f"{ontology.id}.omn", ontology, args)
        cons_docs.append(to_triples(ontology).with_label("consistent", None))
    incons_docs = []
    for ontology, report in injected:
        _write_omn(out / "modules" / f"{ontology.id}.omn", ontology, args)
        incons_docs.append(
            to_triples(ontology).with_label("inconsistent", report.pattern.value)
        )

    # one shared embedding space for the whole corpus (per-module tables are
    # not comparable across modules); each record is the mean of its own
    # structure-token vectors under that space
    embeddings = {}
    if not args.no_embeddings:
        sentences: list[tuple[str, ...]] = []
        for doc in [*cons_docs, *incons_docs]:
            for triple in doc.triples:
                sentences.append(
                    tuple(f"{triple.subject} {triple.relation} {triple.object}".split())
                )
        module_tokens: dict[str, list[str]] = {}
        for ontology in [*ontologies, *(o for o, _ in injected)]:
            walks = random_walks(
                project(ontology),
                depth=args.depth,
                walks_per_node=args.walks,
                seed=derive_seed(args.seed, "walk", ontology.id),
            )
            sentences.extend(walks.sentences)
            module_tokens[ontology.id] = structure_tokens(ontology)
        table = train_skipgram(
            WalkCorpus(tuple(sentences), "combined"),
            TrainConfig(
                dim=args.embed_dim,
                window=args.embed_window,
                epochs=args.embed_epochs,
                negatives=args.embed_negatives,
                seed=derive_seed(args.seed, "embed"),
            ),
        )
        for module_id, tokens in module_tokens.items():
            pooled, _ = mean_pool(tokens, table)
            embeddings[module_id] = [round(float(x), 6) for x in pooled]

    records = build_dataset(
        cons_docs,
        incons_docs,
        args.budget,
        statuses=statuses,
        embeddings=embeddings or None,
        seed=args.seed,
    )
    _write_dataset(records, str(out / "dataset.jsonl"))

    splits = Path(out / "splits")
    splits.mkdir(exist_ok=True)
    base = split_records(records, tuple(args.ratios), args.seed)
    (splits / "base.json").write_text(
        json.dumps(_manifest_json(base), indent=2, sort_keys=True) + "\n"
    )
    for family in FAMILIES:
        manifest = leave_family_out(records, family, tuple(args.ratios), args.seed)
        name = family.replace("*", "star").lower()
        (splits / f"loo_{name}.json").write_text(
            json.dumps(_manifest_json(manifest), indent=2, sort_keys=True) + "\n"
        )

    predictions = {
        r.id: 0 if status_tag(statuses[r.id]) == "consistent" else 1 for r in records
    }
    metrics = evaluate(predictions, records)
    (out / "metrics.json").write_text(
        json.dumps(
            _provenance(args, "metrics") | metrics.to_json_dict(), indent=2, sort_keys=True
        )
        + "\n"
    )

    by_id = {o.id: o for o in ontologies} | {o.id: o for o, _ in injected}
    sample = [(r.id, by_id[r.id]) for r in records]
    tableau_report = time_harness(classify_status, sample, name="tableau")
    from .antipattern import detect

    detector_report = time_harness(detect, sample, name="detector")
    (out / "timing.json").write_text(
        json.dumps(
            _provenance(args, "timing") | merge_timing_reports(tableau_report, detector_report),
            indent=2,
            sort_keys=True,
        )
        + "\n"
    )

    _emit(
        _provenance(args, "pipeline-manifest")
        | {
            "modules": len(ontologies) + len(injected),
            "records": len(records),
            "dataset": str(out / "dataset.jsonl"),
            "splits": sorted(p.name for p in splits.glob("*.json")),
            "accuracy_tableau_as_classifier": metrics.accuracy,
        },
        str(out / "manifest.json"),
    )
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="owlforge",
        description="Build and verify consistency-checking corpora of ontology modules.",
        epilog=f"The fetch subcommand reads its API key from ${'{'}OWLFORGE_API_KEY{'}'}.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate consistent synthetic modules")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--classes", type=int, nargs=2, default=[8, 16])
    p.add_argument("--properties", type=int, nargs=2, default=[2, 4])
    p.add_argument("--individuals", type=int, nargs=2, default=[2, 5])
    p.add_argument("--disjoint-density", type=float, default=0.5)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("fixtures", help="write the 14 minimal pattern fixtures")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fixtures)

    p = sub.add_parser("check", help="consistency and coherence verdict for one module")
    p.add_argument("input")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("inject", help="complete an anti-pattern in a module")
    p.add_argument("input")
    p.add_argument("--pattern", required=True, choices=[p.value for p in AntiPatternId])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-missing", type=int, default=2, choices=[1, 2])
    p.add_argument("--out-dir", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_inject)

    p = sub.add_parser("modularize", help="partition an ontology into modules")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--min-module-classes", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", default=None)
    p.set_defaults(func=_cmd_modularize)

    p = sub.add_parser("translate", help="modules to triples JSONL (and Levi graphs)")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--levi", default=None)
    p.add_argument("--meta", default=None)
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("embed", help="train module embeddings")
    p.add_argument("input")
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--walks", type=int, default=10)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--jsonl", default=None)
    p.add_argument("--meta", default=None)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("build-dataset", help="balance and assemble the dataset")
    p.add_argument("--consistent", required=True)
    p.add_argument("--inconsistent", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_TOKEN_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--split-dir", default=None)
    p.add_argument("--ratios", type=int, nargs=3, default=[70, 15, 15])
    p.add_argument("--leave-family-out", action="store_true")
    p.add_argument("--meta", default=None)
    p.set_defaults(func=_cmd_build_dataset)

    p = sub.add_parser("eval", help="score predictions against a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("fetch", help="download ontologies from a REST repository")
    p.add_argument("--endpoint", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--api-key", default=None)
    p.set_defaults(func=_cmd_fetch)

    p = sub.add_parser("pipeline", help="gen -> inject -> translate -> embed -> dataset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--classes", type=int, nargs=2, default=[8, 16])
    p.add_argument("--properties", type=int, nargs=2, default=[2, 4])
    p.add_argument("--individuals", type=int, nargs=2, default=[2, 5])
    p.add_argument("--out", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_TOKEN_BUDGET)
    p.add_argument("--ratios", type=int, nargs=3, default=[70, 15, 15])
    p.add_argument("--embed-dim", type=int, default=48)
    p.add_argument("--embed-window", type=int, default=3)
    p.add_argument("--embed-epochs", type=int, default=3)
    p.add_argument("--embed-negatives", type=int, default=5)
    p.add_argument("--walks", type=int, default=2)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--no-embeddings", action="store_true")
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DOMAIN_ERRORS as exc:
        sys.stderr.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
