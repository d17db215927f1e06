"""End-to-end dataset construction: filter -> classify -> sample -> generate
-> filter-hints -> prune -> score convergence -> score familiarity -> stats.

Every stage writes its output JSONL plus an updated manifest before the next
stage starts, so a failed run resumes from the last completed stage. Offline
runs are fully deterministic: same config + fixtures -> byte-identical
outputs and manifest.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .analytics import dataset_stats
from .clients.base import parallel_map
from .clients.hub import ServiceHub, live_client, replay_client
from .config import PipelineConfig
from .convergence import score_dataset_convergence
from .errors import ConfigError, ValidationError
from .familiarity import (
    ChatEntityExtractor,
    EntityExtractor,
    FamiliarityNormalizer,
    GazetteerEntityExtractor,
    fit_normalizer_from_file,
    score_dataset_familiarity,
)
from .hints import GenerationStatus, elicit_and_verify, evaluate_hint_filters
from .model import (
    AggregateMode,
    Hint,
    QuestionRecord,
    SourceQuestion,
    load_dataset,
    load_source_questions,
    save_dataset,
    save_source_questions,
    validate_final_record,
)
from .questions import (
    ChatTypeClassifier,
    GazetteerResolver,
    HttpWikiResolver,
    KeywordTypeClassifier,
    TypeClassifier,
    WikiResolver,
    admit_classified,
    filter_question,
    stratified_sample,
)

STAGE_ORDER = (
    "filter",
    "classify",
    "sample",
    "generate",
    "filter_hints",
    "prune",
    "score_hicos",
    "score_hifas",
    "stats",
)

_STAGE_FILES = {
    "filter": "01_filter.jsonl",
    "classify": "02_classify.jsonl",
    "sample": "03_sample.jsonl",
    "generate": "04_generate.jsonl",
    "filter_hints": "05_filter_hints.jsonl",
    "prune": "06_prune.jsonl",
    "score_hicos": "07_score_hicos.jsonl",
    "score_hifas": "08_score_hifas.jsonl",
}

FINAL_FILE = "final.jsonl"
STATS_FILE = "stats.json"
MANIFEST_FILE = "manifest.json"


@dataclass
class PipelineRuntime:
    """The services and helpers a run needs, built once from config."""

    hub: ServiceHub
    resolver: WikiResolver
    extractor: EntityExtractor
    classifier: TypeClassifier
    normalizer: FamiliarityNormalizer


def load_gazetteer(path: str | Path) -> dict[str, str]:
    """Gazetteer file: JSON {"titles": {name: canonical article title}}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    titles = raw.get("titles")
    if not isinstance(titles, dict) or not titles:
        raise ConfigError(f"gazetteer {path} must contain a nonempty 'titles' object")
    return {str(k): str(v) for k, v in titles.items()}


def build_runtime(config: PipelineConfig) -> PipelineRuntime:
    if not config.calibration_path:
        raise ConfigError("pipeline runs require calibration_path")
    normalizer = fit_normalizer_from_file(config.calibration_path)
    if config.offline:
        hub = replay_client(config.fixture_path, parallelism=config.parallelism)
        titles = load_gazetteer(config.gazetteer_path)
        resolver: WikiResolver = GazetteerResolver(titles)
        extractor: EntityExtractor = GazetteerEntityExtractor(titles)
    else:
        hub = live_client(
            chat_base_url=config.chat_base_url,
            chat_model=config.chat_model,
            embed_base_url=config.embed_base_url,
            embed_model=config.embed_model,
            cache_path=config.cache_path or None,
            parallelism=config.parallelism,
            api_key_env=config.api_key_env,
            pageview_base_url=config.pageview_base_url,
        )
        if config.gazetteer_path:
            titles = load_gazetteer(config.gazetteer_path)
            resolver = GazetteerResolver(titles)
            extractor = GazetteerEntityExtractor(titles)
        else:
            resolver = HttpWikiResolver(config.wiki_api_url)
            extractor = ChatEntityExtractor(hub.chat, resolver)
    classifier: TypeClassifier
    if config.classifier == "chat":
        classifier = ChatTypeClassifier(hub.chat)
    else:
        classifier = KeywordTypeClassifier()
    return PipelineRuntime(
        hub=hub,
        resolver=resolver,
        extractor=extractor,
        classifier=classifier,
        normalizer=normalizer,
    )


# ---------------------------------------------------------------------------
# stages


def _stage_filter(
    rows: Sequence[SourceQuestion], resolver: WikiResolver
) -> tuple[list[SourceQuestion], dict]:
    kept: list[SourceQuestion] = []
    reasons: dict[str, int] = {}
    for row in rows:
        verdict = filter_question(row.question, row.answer, resolver)
        if verdict.accepted:
            kept.append(row)
        else:
            name = verdict.reason.value
            reasons[name] = reasons.get(name, 0) + 1
    return kept, reasons


def _stage_classify(
    rows: Sequence[SourceQuestion], classifier: TypeClassifier
) -> tuple[list[SourceQuestion], dict]:
    kept: list[SourceQuestion] = []
    reasons: dict[str, int] = {}
    for row in rows:
        label = classifier.classify(row.question)
        verdict = admit_classified(label)
        if not verdict.accepted:
            name = verdict.reason.value
            reasons[name] = reasons.get(name, 0) + 1
            continue
        row.major_type = label.major
        row.minor_type = label.minor
        kept.append(row)
    return kept, reasons


def _stage_generate(
    rows: Sequence[SourceQuestion], hub: ServiceHub, config: PipelineConfig
) -> tuple[list[QuestionRecord], dict]:
    def one(row: SourceQuestion):
        outcome = elicit_and_verify(
            row.question,
            row.answer,
            hub.chat,
            hints_per_question=config.hints_per_question,
        )
        return row, outcome

    results = parallel_map(one, list(rows), workers=config.parallelism)
    records: list[QuestionRecord] = []
    reasons: dict[str, int] = {}
    for row, outcome in results:
        if outcome.status is not GenerationStatus.OK:
            name = outcome.status.value
            reasons[name] = reasons.get(name, 0) + 1
            continue
        records.append(
            QuestionRecord(
                q_id=row.q_id,
                question=row.question,
                exact_answer=row.answer,
                major_type=row.major_type,
                minor_type=row.minor_type,
                snippet=outcome.snippet or "",
                snippet_sources=outcome.snippet_sources,
                hints=tuple(
                    Hint(text=text, source_indices=indices)
                    for text, indices in outcome.hints_raw
                ),
            )
        )
    return records, reasons


def _stage_filter_hints(
    records: Sequence[QuestionRecord], hub: ServiceHub, config: PipelineConfig
) -> tuple[list[QuestionRecord], dict]:
    kept_records: list[QuestionRecord] = []
    detail = {
        "hints_in": 0,
        "hints_kept": 0,
        "hints_leaked": 0,
        "hints_too_similar": 0,
        "no_hints_left": 0,
    }
    for record in records:
        annotated = evaluate_hint_filters(
            record.hints,
            record.exact_answer,
            record.question,
            hub.embeddings,
            threshold=config.similarity_threshold,
        )
        kept_hints = [hint for hint, kept in annotated if kept]
        detail["hints_in"] += len(record.hints)
        detail["hints_kept"] += len(kept_hints)
        for hint, kept in annotated:
            if kept:
                continue
            if hint.leak_flag:
                detail["hints_leaked"] += 1
            else:
                detail["hints_too_similar"] += 1
        if not kept_hints:
            detail["no_hints_left"] += 1
            continue
        kept_records.append(replace(record, hints=tuple(kept_hints)))
    return kept_records, detail


def _stage_prune(
    records: Sequence[QuestionRecord], config: PipelineConfig
) -> tuple[list[QuestionRecord], dict]:
    kept = [r for r in records if len(r.hints) >= config.min_hints]
    removed = sorted(r.q_id for r in records if len(r.hints) < config.min_hints)
    return kept, {"below_min_hints": len(removed), "q_ids": removed}


# ---------------------------------------------------------------------------
# runner


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _write_manifest(path: Path, manifest: dict) -> None:
    _atomic_write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def run_pipeline(
    config: PipelineConfig,
    source_path: str | Path,
    out_dir: str | Path,
    resume: bool = False,
) -> dict:
    """Run every stage, writing per-stage JSONL, stats.json, final.jsonl and
    manifest.json into ``out_dir``. Returns the manifest.

    With ``resume=True`` completed stages (recorded in the manifest, guarded
    by the config digest) are loaded from disk instead of recomputed.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest_path = out / MANIFEST_FILE
    runtime = build_runtime(config)

    reports: dict[str, dict] = {}
    completed: set[str] = set()
    if resume and manifest_path.exists():
        previous = json.loads(manifest_path.read_text(encoding="utf-8"))
        if previous.get("config_digest") != config.digest():
            raise ConfigError(
                "checkpoint was produced by a different config; not resuming"
            )
        for entry in previous.get("stages", []):
            reports[entry["name"]] = entry
        completed = {
            name for name in previous.get("completed", ()) if name in STAGE_ORDER
        }

    def checkpoint(name: str, n_in: int, n_out: int, detail: dict) -> None:
        if n_in != n_out + sum(
            v for k, v in detail.items() if isinstance(v, int) and k in _REJECT_KEYS
        ):
            raise ValidationError(
                name, f"stage accounting broken: {n_in} in, {n_out} out, {detail}"
            )
        reports[name] = {
            "name": name,
            "in": n_in,
            "out": n_out,
            "rejected": n_in - n_out,
            "detail": detail,
        }
        completed.add(name)
        manifest = {
            "config_digest": config.digest(),
            "stages": [reports[s] for s in STAGE_ORDER if s in reports],
            "completed": [s for s in STAGE_ORDER if s in completed],
            "cache": runtime.hub.chat.store.stats(),
        }
        _write_manifest(manifest_path, manifest)

    # ---- filter
    stage_file = out / _STAGE_FILES["filter"]
    if "filter" in completed and stage_file.exists():
        rows = load_source_questions(stage_file)
    else:
        source_rows = load_source_questions(source_path)
        rows, reasons = _stage_filter(source_rows, runtime.resolver)
        save_source_questions(rows, stage_file)
        checkpoint("filter", len(source_rows), len(rows), reasons)

    # ---- classify
    stage_file = out / _STAGE_FILES["classify"]
    if "classify" in completed and stage_file.exists():
        rows = load_source_questions(stage_file)
    else:
        n_in = len(rows)
        rows, reasons = _stage_classify(rows, runtime.classifier)
        save_source_questions(rows, stage_file)
        checkpoint("classify", n_in, len(rows), reasons)

    # ---- sample
    stage_file = out / _STAGE_FILES["sample"]
    if "sample" in completed and stage_file.exists():
        rows = load_source_questions(stage_file)
    else:
        n_in = len(rows)
        rows = stratified_sample(rows, config.sample_fraction, config.seed)
        save_source_questions(rows, stage_file)
        checkpoint("sample", n_in, len(rows), {"not_sampled": n_in - len(rows)})

    # ---- generate (answer elicitation + verification + hint listing)
    stage_file = out / _STAGE_FILES["generate"]
    if "generate" in completed and stage_file.exists():
        records = load_dataset(stage_file)
    else:
        records, reasons = _stage_generate(rows, runtime.hub, config)
        save_dataset(records, stage_file)
        checkpoint("generate", len(rows), len(records), reasons)

    # ---- filter hints
    stage_file = out / _STAGE_FILES["filter_hints"]
    if "filter_hints" in completed and stage_file.exists():
        records = load_dataset(stage_file)
    else:
        n_in = len(records)
        records, detail = _stage_filter_hints(records, runtime.hub, config)
        save_dataset(records, stage_file)
        checkpoint("filter_hints", n_in, len(records), detail)

    # ---- prune
    stage_file = out / _STAGE_FILES["prune"]
    if "prune" in completed and stage_file.exists():
        records = load_dataset(stage_file)
    else:
        n_in = len(records)
        records, detail = _stage_prune(records, config)
        save_dataset(records, stage_file)
        checkpoint("prune", n_in, len(records), detail)

    # ---- convergence scores
    stage_file = out / _STAGE_FILES["score_hicos"]
    if "score_hicos" in completed and stage_file.exists():
        records = load_dataset(stage_file)
    else:
        n_in = len(records)
        records = score_dataset_convergence(
            records, runtime.hub.chat, candidate_count=config.candidate_count
        )
        save_dataset(records, stage_file)
        checkpoint("score_hicos", n_in, len(records), {})

    # ---- familiarity scores
    stage_file = out / _STAGE_FILES["score_hifas"]
    if "score_hifas" in completed and stage_file.exists():
        records = load_dataset(stage_file)
    else:
        n_in = len(records)
        records = score_dataset_familiarity(
            records,
            runtime.normalizer,
            runtime.hub.pageviews,
            extractor=runtime.extractor,
            mode=AggregateMode(config.aggregate_mode),
            resolver=runtime.resolver,
        )
        save_dataset(records, stage_file)
        checkpoint("score_hifas", n_in, len(records), {})

    # ---- stats + final gate
    if "stats" not in completed or not (out / FINAL_FILE).exists():
        for record in records:
            validate_final_record(record, config.similarity_threshold)
        stats = dataset_stats(records)
        _atomic_write_text(
            out / STATS_FILE, json.dumps(stats.to_dict(), indent=2, sort_keys=True) + "\n"
        )
        save_dataset(records, out / FINAL_FILE, final=True)
        checkpoint("stats", len(records), len(records), {})

    return json.loads(manifest_path.read_text(encoding="utf-8"))


# Keys in a stage detail dict that count rejected rows (everything else is
# informational, e.g. per-hint counters).
_REJECT_KEYS = {
    "TooShort",
    "TooLong",
    "NoQuestionMark",
    "AnswerNoWikiPage",
    "DescriptionType",
    "not_sampled",
    "AnswerNotFound",
    "AnswerMismatch",
    "no_hints_left",
    "below_min_hints",
}
