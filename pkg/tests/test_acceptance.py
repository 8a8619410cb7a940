"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``. The shared 1,000-module
corpus is generated once per session and reused across criteria.
"""

import collections
import json
import random
import time

import numpy as np
import pytest

from owlforge.antipattern import AntiPatternId, NoSiteError, detect, inject, minimal_fixture
from owlforge.corpus import (
    DatasetRecord,
    SynthConfig,
    build_dataset,
    derive_seed,
    generate_synthetic,
    inject_corpus,
    merge_timing_reports,
    split_sizes,
    time_harness,
)
from owlforge.embed import TrainConfig, mean_pool, pair_loss_and_grads, train_skipgram, WalkCorpus
from owlforge.finitemodel import oracle_classify_status
from owlforge.manchester import ParseError, parse, serialize
from owlforge.model import (
    ConsistentCoherent,
    Incoherent,
    Inconsistent,
    same_axioms,
    status_tag,
)
from owlforge.tableau import classify_status
from owlforge.translate import Triple, TripleDoc, to_triples

SEED = 20240809

EXPECTED_PARTITION = {
    "OOD": "inconsistent",
    "OOR": "inconsistent",
    "AIO": "incoherent",
    "EID": "incoherent",
    "UE": "incoherent",
    "UEWI_2": "incoherent",
    "UEWPI": "incoherent",
    "UEWIP": "incoherent",
    "SOSINETO": "incoherent",
    "OIL": "consistent",
    "OILWI": "consistent",
    "OILWPI": "consistent",
    "UEWI_1": "consistent",  # as printed; see the oracle confirmation below
    "CSC": "consistent",
}

SEMANTIC_PATTERNS = {
    p for p, status in EXPECTED_PARTITION.items() if status != "consistent"
}


@pytest.fixture(scope="session")
def desk_corpus():
    ontologies = generate_synthetic(SynthConfig(n_ontologies=1000, seed=SEED))
    injected = inject_corpus(ontologies, seed=SEED)
    return ontologies, injected


def test_pattern_semantics_table():
    """Criterion 1: tableau status equals the exhaustive-oracle status on all
    14 minimal fixtures, matching the expected partition, in under 10 s."""
    start = time.perf_counter()
    for pattern in AntiPatternId:
        fixture = minimal_fixture(pattern)
        tableau_status = classify_status(fixture)
        oracle_status = oracle_classify_status(fixture, max_domain=3)
        expected = EXPECTED_PARTITION[pattern.value]
        assert status_tag(tableau_status) == expected, pattern
        assert status_tag(oracle_status) == expected, pattern
        if isinstance(tableau_status, Incoherent):
            assert isinstance(oracle_status, Incoherent)
            assert tableau_status.unsatisfiable == oracle_status.unsatisfiable, pattern
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"semantics table took {elapsed:.1f}s"
    print(f"\n[ACCEPTANCE] pattern semantics table: PASS ({elapsed:.2f}s, 14/14 confirmed)")


def test_detector_injector_duality(desk_corpus):
    """Criterion 2: detect(inject(o, id, s)) contains id for every applicable
    pattern over at least 500 synthetic modules; at most 2 axioms injected."""
    ontologies, _ = desk_corpus
    modules = ontologies[:500]
    attempted = injected_count = 0
    for i, ontology in enumerate(modules):
        for pattern in AntiPatternId:
            attempted += 1
            try:
                modified, report = inject(
                    ontology, pattern, derive_seed(SEED, "duality", i, pattern.value)
                )
            except NoSiteError:
                continue
            injected_count += 1
            assert 1 <= len(report.injected_axioms) <= 2, (ontology.id, pattern)
            hits = [p for p, _ in detect(modified)]
            assert pattern in hits, (ontology.id, pattern)
    assert injected_count >= 500  # plenty of applicable pattern sites
    print(
        f"\n[ACCEPTANCE] detector/injector duality: PASS "
        f"({injected_count}/{attempted} applicable, 100% detected, <=2 axioms)"
    )


def test_end_to_end_label_soundness(desk_corpus):
    """Criterion 3: on a >=1,000 module corpus, every label-0 record is
    consistent-coherent and every semantic-pattern record is not."""
    ontologies, injected = desk_corpus
    assert len(ontologies) >= 1000
    failures = []
    for ontology in ontologies:
        if not isinstance(classify_status(ontology), ConsistentCoherent):
            failures.append(("label0", ontology.id))
    semantic_checked = 0
    for ontology, report in injected:
        if report.pattern.value in SEMANTIC_PATTERNS:
            semantic_checked += 1
            if isinstance(classify_status(ontology), ConsistentCoherent):
                failures.append(("label1", ontology.id))
    assert failures == []
    print(
        f"\n[ACCEPTANCE] end-to-end label soundness: PASS "
        f"({len(ontologies)} consistent + {semantic_checked} semantic records, 0 failures)"
    )


def test_parser_round_trip_and_fuzz(desk_corpus):
    """Criterion 4: parse-serialize identity on every generated ontology and
    fixture; 10,000 mutated inputs crash-free."""
    ontologies, injected = desk_corpus
    subjects = list(ontologies) + [o for o, _ in injected]
    subjects += [minimal_fixture(p) for p in AntiPatternId]
    for ontology in subjects:
        assert same_axioms(parse(serialize(ontology), ontology_id=ontology.id), ontology)

    rng = random.Random(SEED)
    bases = [serialize(minimal_fixture(p)) for p in AntiPatternId]
    bases += [serialize(o) for o in ontologies[:6]]
    crashes = 0
    for i in range(10_000):
        base = bases[i % len(bases)]
        kind = rng.randrange(3)
        pos = rng.randrange(len(base))
        if kind == 0:  # replace
            mutated = base[:pos] + chr(rng.randrange(32, 127)) + base[pos + 1 :]
        elif kind == 1:  # delete a span
            mutated = base[:pos] + base[pos + rng.randrange(1, 8) :]
        else:  # insert noise
            mutated = base[:pos] + rng.choice(["(", ")", ":", "max", "\x00", "##"]) + base[pos:]
        try:
            parse(mutated)
        except ParseError:
            pass
        except Exception:  # noqa: BLE001 - the criterion is "no crash"
            crashes += 1
    assert crashes == 0
    print(
        f"\n[ACCEPTANCE] parser round-trip + fuzz: PASS "
        f"({len(subjects)} documents round-tripped, 10000 mutations, 0 crashes)"
    )


TABLE_CENSUS_TOTAL = {
    "AIO": 1338, "EID": 3656, "OIL": 1, "OILWI": 1, "OILWPI": 0, "UE": 1357,
    "UEWI_1": 63, "UEWI_2": 62, "UEWPI": 4, "UEWIP": 20, "SOSINETO": 6,
    "OOR": 27, "OOD": 24, "CSC": 3520,
}
TABLE_USED_BIG4 = {"AIO": 538, "EID": 1467, "UE": 544, "CSC": 1412}
RARE_USED = {
    p: n for p, n in TABLE_CENSUS_TOTAL.items() if p not in TABLE_USED_BIG4 and n > 0
}


def _census_docs():
    consistent = [
        TripleDoc(f"c{i:05d}", (Triple("a", "is a", "class"),), 5, "consistent", None)
        for i in range(4169)
    ]
    inconsistent = []
    for pattern, count in TABLE_CENSUS_TOTAL.items():
        for i in range(count):
            inconsistent.append(
                TripleDoc(
                    f"{pattern.lower()}-{i:05d}",
                    (Triple("a", "is a", "class"),),
                    5,
                    "inconsistent",
                    pattern,
                )
            )
    return consistent, inconsistent


def test_dataset_construction(desk_corpus):
    """Criterion 5 (construction): exact balance, the documented split-size
    arithmetic, byte-identical reruns, and census proportions within the
    +/-1 quantization of deterministic apportionment."""
    ontologies, injected = desk_corpus
    cons_docs = [to_triples(o).with_label("consistent", None) for o in ontologies[:200]]
    incons_docs = [
        to_triples(o).with_label("inconsistent", r.pattern.value)
        for o, r in injected[:170]
    ]
    records = build_dataset(cons_docs, incons_docs, budget=4096, seed=SEED)
    zeros = sum(1 for r in records if r.label == 0)
    ones = sum(1 for r in records if r.label == 1)
    assert zeros == ones

    assert split_sizes(8338, (70, 15, 15)) == (5837, 1250, 1251)

    again = build_dataset(cons_docs, incons_docs, budget=4096, seed=SEED)
    def dump(rs):
        return json.dumps(
            [[r.id, r.label, r.pattern.value if r.pattern else None] for r in rs]
        ).encode()
    assert dump(records) == dump(again)

    consistent, inconsistent = _census_docs()
    census_records = build_dataset(consistent, inconsistent, budget=4096, seed=SEED)
    got = collections.Counter(
        r.pattern.value for r in census_records if r.label == 1
    )
    assert sum(1 for r in census_records if r.label == 0) == 4169
    assert sum(got.values()) == 4169
    for pattern, used in RARE_USED.items():
        assert got[pattern] == used, f"rare pattern {pattern} not kept whole"
    assert sum(got[p] for p in TABLE_USED_BIG4) == 3961
    for pattern, used in TABLE_USED_BIG4.items():
        assert abs(got[pattern] - used) <= 1, (pattern, got[pattern], used)
    big_four = {p: got[p] for p in TABLE_USED_BIG4}
    print(
        "\n[ACCEPTANCE] dataset construction: PASS "
        f"(balanced {zeros}/{ones}, sizes {split_sizes(8338, (70, 15, 15))}, "
        f"byte-identical rerun, census big-four {big_four})"
    )


@pytest.mark.xfail(
    strict=True,
    reason=(
        "The published per-pattern Used counts (AIO 538, EID 1467, UE 544, CSC 1412 "
        "over a 3961 quota) cannot be produced by any quota-respecting or divisor "
        "apportionment: AIO deviates from its exact share 536.908 by more than one "
        "seat and the divisor intervals for AIO=538 and UE=544 are disjoint. The "
        "counts are uniform-sampling noise; the deterministic largest-remainder "
        "builder yields 537/1467/545/1412."
    ),
)
def test_dataset_census_exact():
    """Criterion 5 (strict census): reproduce the published big-four counts
    exactly from the pre-filter census."""
    consistent, inconsistent = _census_docs()
    records = build_dataset(consistent, inconsistent, budget=4096, seed=SEED)
    got = collections.Counter(r.pattern.value for r in records if r.label == 1)
    for pattern, used in TABLE_USED_BIG4.items():
        assert got[pattern] == used, (pattern, got[pattern], used)


def test_embedding_numerics():
    """Criterion 6: analytic skip-gram gradients match central finite
    differences to 1e-4, epoch losses never increase, pooling is
    permutation-invariant."""
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(5):
        center = rng.normal(0, 0.5, 16)
        context = rng.normal(0, 0.5, 16)
        negatives = rng.normal(0, 0.5, (5, 16))
        _, d_center, d_context, d_negatives = pair_loss_and_grads(center, context, negatives)
        eps = 1e-6

        def numeric(param, setter):
            grad = np.zeros_like(param)
            flat = param.reshape(-1)
            gflat = grad.reshape(-1)
            for i in range(flat.size):
                up, down = param.copy(), param.copy()
                up.reshape(-1)[i] += eps
                down.reshape(-1)[i] -= eps
                gflat[i] = (setter(up) - setter(down)) / (2 * eps)
            return grad

        n_center = numeric(center, lambda p: pair_loss_and_grads(p, context, negatives)[0])
        n_context = numeric(context, lambda p: pair_loss_and_grads(center, p, negatives)[0])
        n_neg = numeric(negatives, lambda p: pair_loss_and_grads(center, context, p)[0])
        for exact, approx in ((d_center, n_center), (d_context, n_context), (d_negatives, n_neg)):
            rel = np.abs(exact - approx) / np.maximum(1e-8, np.abs(exact) + np.abs(approx))
            worst = max(worst, float(rel.max()))
    assert worst < 1e-4

    corpus = WalkCorpus(
        tuple(
            tuple(f"t{(i * j) % 7}" for j in range(5))
            for i in range(12)
        ),
        "structure",
    )
    table = train_skipgram(corpus, TrainConfig(dim=16, epochs=10, window=3, seed=1))
    losses = table.epoch_losses
    assert all(b <= a for a, b in zip(losses, losses[1:])), losses

    tokens = ["t0", "t1", "t2", "t3", "t0"]
    base, _ = mean_pool(tokens, table)
    for _ in range(10):
        shuffled = list(tokens)
        random.Random(_).shuffle(shuffled)
        permuted, _oov = mean_pool(shuffled, table)
        assert np.allclose(base, permuted)
    print(
        f"\n[ACCEPTANCE] embedding numerics: PASS "
        f"(max grad rel err {worst:.2e}, losses non-increasing, pooling permutation-invariant)"
    )


def test_performance_bounds(desk_corpus, tmp_path):
    """Criterion 7: tableau over 1,000 desk modules under 5 minutes, the
    detector under 60 seconds, and a combined timing report emitted."""
    ontologies, _ = desk_corpus
    sample = [(o.id, o) for o in ontologies[:1000]]
    tableau_report = time_harness(classify_status, sample, name="tableau")
    detector_report = time_harness(detect, sample, name="detector")
    assert tableau_report.total_ms < 5 * 60 * 1000, tableau_report.total_ms
    assert detector_report.total_ms < 60 * 1000, detector_report.total_ms
    merged = merge_timing_reports(tableau_report, detector_report)
    out = tmp_path / "timing.json"
    out.write_text(json.dumps(merged, indent=2, sort_keys=True))
    reloaded = json.loads(out.read_text())
    assert set(reloaded["totals_ms"]) == {"tableau", "detector"}
    print(
        f"\n[ACCEPTANCE] performance bounds: PASS "
        f"(tableau {tableau_report.total_ms / 1000:.1f}s < 300s, "
        f"detector {detector_report.total_ms / 1000:.1f}s < 60s, report written)"
    )
