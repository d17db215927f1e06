"""Command-line interface. One subcommand per pipeline stage plus the
analytics utilities, the end-to-end runner, and the annotation server."""

from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from dataclasses import replace as dc_replace
from pathlib import Path

import click

from .analytics import (
    HttpRetriever,
    StaticRetriever,
    answer_difficulty,
    correlation_report,
    dataset_stats,
    hicos_sweep,
    load_human_ratings,
    paired_scores,
    question_difficulty,
    relevance_fraction,
    write_sweep_csv,
)
from .clients.hub import ServiceHub, live_client, replay_client
from .config import PipelineConfig, load_config
from .convergence import DEFAULT_CANDIDATE_COUNT, score_dataset_convergence
from .errors import HintkitError
from .familiarity import (
    GazetteerEntityExtractor,
    fit_normalizer_from_file,
    score_dataset_familiarity,
)
from .hints import evaluate_hint_filters
from .model import (
    AggregateMode,
    SIMILARITY_THRESHOLD,
    load_dataset,
    load_source_questions,
    save_dataset,
    save_source_questions,
)
from .pipeline import run_pipeline
from .questions import GazetteerResolver, stratified_sample


@contextmanager
def _friendly_errors():
    try:
        yield
    except HintkitError as exc:
        raise click.ClickException(str(exc)) from exc


def _build_hub(
    offline: bool,
    fixture: str | None,
    chat_url: str,
    provider: str,
    embed_url: str = "",
    embed_model: str = "",
    cache: str | None = None,
    parallelism: int = 4,
) -> ServiceHub:
    if offline:
        if not fixture:
            raise click.ClickException("--offline requires --fixture")
        return replay_client(fixture, parallelism=parallelism)
    return live_client(
        chat_base_url=chat_url,
        chat_model=provider,
        embed_base_url=embed_url or chat_url,
        embed_model=embed_model or provider,
        cache_path=cache,
        parallelism=parallelism,
    )


@click.group()
@click.version_option(package_name="hintkit")
def main() -> None:
    """Build and evaluate hint datasets for factoid questions."""


# ---------------------------------------------------------------------------


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--fraction", type=float, required=True, help="Sampled share of rows, in (0, 1].")
@click.option("--seed", type=int, default=13, show_default=True)
def sample(in_path: str, out_path: str, fraction: float, seed: int) -> None:
    """Stratified sample of classified source questions."""
    with _friendly_errors():
        rows = load_source_questions(in_path)
        sampled = stratified_sample(rows, fraction, seed)
        save_source_questions(sampled, out_path)
    click.echo(f"sampled {len(sampled)} of {len(rows)} questions -> {out_path}")


@main.command("generate-hints")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--provider", default="default-chat", show_default=True, help="Chat model name.")
@click.option("--chat-url", default="", help="Chat endpoint base URL (live mode).")
@click.option("--offline", is_flag=True, help="Answer from a recorded fixture only.")
@click.option("--fixture", type=click.Path(exists=True), help="Fixture store (JSONL).")
@click.option("--cache", type=click.Path(), help="Response cache to append to (live mode).")
@click.option("--hints", "hints_per_question", type=int, default=10, show_default=True)
@click.option("--parallelism", type=int, default=4, show_default=True)
def generate_hints(
    in_path: str,
    out_path: str,
    provider: str,
    chat_url: str,
    offline: bool,
    fixture: str | None,
    cache: str | None,
    hints_per_question: int,
    parallelism: int,
) -> None:
    """Elicit answers, verify them, and collect hint lists."""
    from .pipeline import _stage_generate

    with _friendly_errors():
        rows = load_source_questions(in_path)
        hub = _build_hub(offline, fixture, chat_url, provider,
                         cache=cache, parallelism=parallelism)
        config = PipelineConfig(
            hints_per_question=hints_per_question, parallelism=parallelism
        )
        records, reasons = _stage_generate(rows, hub, config)
        save_dataset(records, out_path)
    click.echo(
        f"generated hints for {len(records)} of {len(rows)} questions "
        f"(rejected: {json.dumps(reasons, sort_keys=True)}) -> {out_path}"
    )


@main.command("filter-hints")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--threshold", type=float, default=SIMILARITY_THRESHOLD, show_default=True)
@click.option("--provider", default="default-embed", show_default=True, help="Embedding model name.")
@click.option("--embed-url", default="", help="Embedding endpoint base URL (live mode).")
@click.option("--offline", is_flag=True)
@click.option("--fixture", type=click.Path(exists=True))
@click.option("--cache", type=click.Path())
def filter_hints_cmd(
    in_path: str,
    out_path: str,
    threshold: float,
    provider: str,
    embed_url: str,
    offline: bool,
    fixture: str | None,
    cache: str | None,
) -> None:
    """Drop answer-leaking and question-rephrasing hints."""
    with _friendly_errors():
        records = load_dataset(in_path)
        hub = _build_hub(offline, fixture, embed_url, provider,
                         embed_url=embed_url, embed_model=provider, cache=cache)
        out_records = []
        hints_in = hints_kept = 0
        for record in records:
            annotated = evaluate_hint_filters(
                record.hints, record.exact_answer, record.question,
                hub.embeddings, threshold=threshold,
            )
            kept = [hint for hint, ok in annotated if ok]
            hints_in += len(record.hints)
            hints_kept += len(kept)
            if kept:
                out_records.append(dc_replace(record, hints=tuple(kept)))
        save_dataset(out_records, out_path)
    click.echo(
        f"kept {hints_kept} of {hints_in} hints across {len(out_records)} questions -> {out_path}"
    )


@main.command("score-hicos")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--candidates", type=int, default=DEFAULT_CANDIDATE_COUNT, show_default=True)
@click.option("--provider", default="default-chat", show_default=True)
@click.option("--chat-url", default="")
@click.option("--offline", is_flag=True)
@click.option("--fixture", type=click.Path(exists=True))
@click.option("--cache", type=click.Path())
@click.option("--parallelism", type=int, default=4, show_default=True)
def score_hicos(
    in_path: str,
    out_path: str,
    candidates: int,
    provider: str,
    chat_url: str,
    offline: bool,
    fixture: str | None,
    cache: str | None,
    parallelism: int,
) -> None:
    """Attach convergence scores (per hint and per question)."""
    with _friendly_errors():
        records = load_dataset(in_path)
        hub = _build_hub(offline, fixture, chat_url, provider,
                         cache=cache, parallelism=parallelism)
        scored = score_dataset_convergence(records, hub.chat, candidate_count=candidates)
        save_dataset(scored, out_path)
    click.echo(f"scored convergence for {len(scored)} questions -> {out_path}")


@main.command("score-hifas")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--calibration", required=True, type=click.Path(exists=True),
              help="Calibration corpus (JSONL of title + mean_monthly_views).")
@click.option("--mode", type=click.Choice(["min", "avg", "max"]), default="avg", show_default=True)
@click.option("--gazetteer", type=click.Path(exists=True),
              help="JSON gazetteer for entity extraction and title resolution.")
@click.option("--pageview-url", default="https://wikimedia.org/api/rest_v1", show_default=True)
@click.option("--offline", is_flag=True)
@click.option("--fixture", type=click.Path(exists=True))
@click.option("--cache", type=click.Path())
def score_hifas(
    in_path: str,
    out_path: str,
    calibration: str,
    mode: str,
    gazetteer: str | None,
    pageview_url: str,
    offline: bool,
    fixture: str | None,
    cache: str | None,
) -> None:
    """Attach familiarity scores from entity pageview popularity."""
    from .pipeline import load_gazetteer

    with _friendly_errors():
        records = load_dataset(in_path)
        normalizer = fit_normalizer_from_file(calibration)
        if offline:
            if not fixture:
                raise click.ClickException("--offline requires --fixture")
            hub = replay_client(fixture)
        else:
            hub = live_client(
                chat_base_url="", chat_model="unused",
                embed_base_url="", embed_model="unused",
                cache_path=cache, pageview_base_url=pageview_url,
            )
        extractor = resolver = None
        if gazetteer:
            titles = load_gazetteer(gazetteer)
            extractor = GazetteerEntityExtractor(titles)
            resolver = GazetteerResolver(titles)
        scored = score_dataset_familiarity(
            records, normalizer, hub.pageviews,
            extractor=extractor, mode=AggregateMode(mode), resolver=resolver,
        )
        save_dataset(scored, out_path)
    click.echo(f"scored familiarity for {len(scored)} questions -> {out_path}")


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--retriever", "retriever_kind", type=click.Choice(["stub", "http"]),
              default="stub", show_default=True)
@click.option("--passages", "passages_path", type=click.Path(exists=True),
              help="Stub retriever: text file, one passage per line.")
@click.option("--retriever-url", default="", help="HTTP retriever base URL.")
@click.option("--k", type=int, default=500, show_default=True)
@click.option("--out", "out_path", type=click.Path(), help="Write JSONL here instead of stdout.")
def difficulty(
    in_path: str,
    retriever_kind: str,
    passages_path: str | None,
    retriever_url: str,
    k: int,
    out_path: str | None,
) -> None:
    """Difficulty labels per question (retrieval) and per answer (popularity)."""
    with _friendly_errors():
        records = load_dataset(in_path)
        if retriever_kind == "stub":
            if not passages_path:
                raise click.ClickException("--retriever stub requires --passages")
            passages = Path(passages_path).read_text(encoding="utf-8").splitlines()
            retriever = StaticRetriever([p for p in passages if p.strip()])
        else:
            if not retriever_url:
                raise click.ClickException("--retriever http requires --retriever-url")
            retriever = HttpRetriever(retriever_url)
        lines = []
        for record in records:
            fraction = relevance_fraction(record.question, record.exact_answer, retriever, k=k)
            row = {
                "q_id": record.q_id,
                "relevance_fraction": fraction,
                "question_difficulty": question_difficulty(fraction).level.value,
            }
            if record.exact_answer_popularity is not None:
                row["answer_popularity"] = record.exact_answer_popularity
                row["answer_difficulty"] = answer_difficulty(
                    record.exact_answer_popularity
                ).level.value
            lines.append(json.dumps(row, ensure_ascii=False))
        body = "\n".join(lines) + "\n"
        if out_path:
            Path(out_path).write_text(body, encoding="utf-8")
            click.echo(f"difficulty for {len(records)} questions -> {out_path}")
        else:
            click.echo(body, nl=False)


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
def stats(in_path: str) -> None:
    """Dataset aggregates (question/hint lengths, entities, sources)."""
    with _friendly_errors():
        report = dataset_stats(load_dataset(in_path))
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--human", "human_path", required=True, type=click.Path(exists=True),
              help="Annotation export (ratings.jsonl).")
@click.option("--metric", type=click.Choice(["hicos", "hifas"]), required=True)
@click.option("--attribute", default=None,
              help="Human attribute to correlate (defaults to the metric's namesake).")
def correlate(in_path: str, human_path: str, metric: str, attribute: str | None) -> None:
    """Pearson r and MSE between human ratings and a metric."""
    with _friendly_errors():
        records = load_dataset(in_path)
        attribute = attribute or ("convergence" if metric == "hicos" else "familiarity")
        human = load_human_ratings(human_path, attribute)
        xs, ys = paired_scores(records, human, metric)
        report = correlation_report(xs, ys)
    click.echo(
        json.dumps(
            {"metric": metric, "attribute": attribute, "pearson_r": report.pearson_r,
             "mse": report.mse, "n": report.n},
            indent=2, sort_keys=True,
        )
    )


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--human", "human_path", required=True, type=click.Path(exists=True))
@click.option("--n", "n_spec", default="1..20", show_default=True,
              help="Candidate-count range, e.g. 1..20 or a single number.")
@click.option("--out", "out_path", type=click.Path(), help="Write the curve CSV here.")
@click.option("--attribute", default="convergence", show_default=True)
@click.option("--provider", default="default-chat", show_default=True)
@click.option("--chat-url", default="")
@click.option("--offline", is_flag=True)
@click.option("--fixture", type=click.Path(exists=True))
@click.option("--cache", type=click.Path())
@click.option("--parallelism", type=int, default=4, show_default=True)
def sweep(
    in_path: str,
    human_path: str,
    n_spec: str,
    out_path: str | None,
    attribute: str,
    provider: str,
    chat_url: str,
    offline: bool,
    fixture: str | None,
    cache: str | None,
    parallelism: int,
) -> None:
    """Correlation curve over candidate-list sizes."""
    with _friendly_errors():
        records = load_dataset(in_path)
        human = load_human_ratings(human_path, attribute)
        if ".." in n_spec:
            lo, hi = n_spec.split("..", 1)
            n_range = list(range(int(lo), int(hi) + 1))
        else:
            n_range = [int(n_spec)]
        hub = _build_hub(offline, fixture, chat_url, provider,
                         cache=cache, parallelism=parallelism)
        points = hicos_sweep(records, human, hub.chat, n_range=n_range)
        if out_path:
            write_sweep_csv(points, out_path)
        best = max(points, key=lambda p: p.pearson_r)
        click.echo(
            json.dumps(
                {
                    "curve": [
                        {"n": p.n_candidates, "pearson_r": p.pearson_r, "n_samples": p.n_samples}
                        for p in points
                    ],
                    "best_n": best.n_candidates,
                },
                indent=2, sort_keys=True,
            )
        )


@main.command("run-all")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--resume", is_flag=True, help="Reuse completed stages from a previous run.")
def run_all(config_path: str, in_path: str, out_dir: str, resume: bool) -> None:
    """Run the whole pipeline: filter, classify, sample, generate, filter
    hints, prune, score, stats."""
    with _friendly_errors():
        config = load_config(config_path)
        manifest = run_pipeline(config, in_path, out_dir, resume=resume)
    final_count = manifest["stages"][-1]["out"] if manifest["stages"] else 0
    click.echo(f"pipeline complete: {final_count} records -> {out_dir}")


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path(exists=True),
              help="Final dataset JSONL to annotate.")
@click.option("--plan", "plan_path", type=click.Path(exists=True),
              help="Assignment plan JSON.")
@click.option("--events", "events_path", type=click.Path(),
              help="Append-only event log (created if missing, replayed if present).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(data_path: str, plan_path: str | None, events_path: str | None,
          host: str, port: int) -> None:
    """Serve the annotation API over HTTP."""
    from .annotation import serve_annotation

    with _friendly_errors():
        records = load_dataset(data_path)
        plan = None
        if plan_path:
            plan = json.loads(Path(plan_path).read_text(encoding="utf-8"))
        serve_annotation(records, plan=plan, event_log_path=events_path,
                         host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
