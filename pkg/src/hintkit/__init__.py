"""hintkit: build and evaluate hint datasets for factoid questions.

The pipeline turns question/answer pairs into records carrying generated
hints, leakage/similarity filter verdicts, convergence scores (how sharply a
hint narrows the candidate answers), and familiarity scores (how well-known
the hint's entities are, from Wikipedia pageviews), plus difficulty labels,
dataset statistics, and a human-annotation service for validating the
automatic metrics.
"""

from .analytics import (
    AggregationComparison,
    CorrelationReport,
    DifficultyBasis,
    DifficultyLabel,
    DifficultyLevel,
    StatsReport,
    SweepPoint,
    answer_difficulty,
    compare_aggregations,
    dataset_stats,
    hicos_sweep,
    mse,
    pearson,
    question_difficulty,
    relevance_fraction,
)
from .config import PipelineConfig, load_config
from .convergence import (
    convergence_score,
    evaluate_hint_convergence,
    generate_candidates,
    inject_ground_truth,
    judge_hint_candidate,
    score_dataset_convergence,
)
from .errors import (
    ArticleMissingError,
    ClassificationError,
    ConfigError,
    FixtureMissingError,
    GenerationError,
    HintkitError,
    JudgementError,
    ProtocolViolationError,
    RecordParseError,
    TransportError,
    UndefinedCorrelationError,
    UnknownResourceError,
    ValidationError,
)
from .familiarity import (
    FamiliarityNormalizer,
    FamiliarityResult,
    fit_normalizer,
    hifas_aggregate,
    normalize,
    raw_popularity,
    score_dataset_familiarity,
)
from .hints import (
    GenerationOutcome,
    GenerationStatus,
    LeakageReport,
    answers_match,
    elicit_and_verify,
    filter_hints,
    leaks_answer,
    parse_source_markers,
    prune_questions,
    question_similarity,
)
from .model import (
    AggregateMode,
    DatasetSplit,
    EntityMention,
    Hint,
    MajorType,
    QuestionRecord,
    SourceQuestion,
    load_dataset,
    load_source_questions,
    parse_record,
    save_dataset,
    save_source_questions,
    serialize_record,
    split_dataset,
    validate_final_record,
    validate_record,
)
from .pipeline import run_pipeline
from .questions import (
    AdmissionVerdict,
    QuestionTypeLabel,
    RejectReason,
    admit_classified,
    filter_question,
    stratified_sample,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissionVerdict",
    "AggregateMode",
    "AggregationComparison",
    "ArticleMissingError",
    "ClassificationError",
    "ConfigError",
    "CorrelationReport",
    "DatasetSplit",
    "DifficultyBasis",
    "DifficultyLabel",
    "DifficultyLevel",
    "EntityMention",
    "FamiliarityNormalizer",
    "FamiliarityResult",
    "FixtureMissingError",
    "GenerationError",
    "GenerationOutcome",
    "GenerationStatus",
    "Hint",
    "HintkitError",
    "JudgementError",
    "LeakageReport",
    "MajorType",
    "PipelineConfig",
    "ProtocolViolationError",
    "QuestionRecord",
    "QuestionTypeLabel",
    "RecordParseError",
    "RejectReason",
    "SourceQuestion",
    "StatsReport",
    "SweepPoint",
    "TransportError",
    "UndefinedCorrelationError",
    "UnknownResourceError",
    "ValidationError",
    "admit_classified",
    "answer_difficulty",
    "answers_match",
    "compare_aggregations",
    "convergence_score",
    "dataset_stats",
    "elicit_and_verify",
    "evaluate_hint_convergence",
    "filter_hints",
    "filter_question",
    "fit_normalizer",
    "generate_candidates",
    "hicos_sweep",
    "hifas_aggregate",
    "inject_ground_truth",
    "judge_hint_candidate",
    "leaks_answer",
    "load_config",
    "load_dataset",
    "load_source_questions",
    "mse",
    "normalize",
    "parse_record",
    "parse_source_markers",
    "pearson",
    "prune_questions",
    "question_difficulty",
    "question_similarity",
    "raw_popularity",
    "relevance_fraction",
    "run_pipeline",
    "save_dataset",
    "save_source_questions",
    "score_dataset_convergence",
    "score_dataset_familiarity",
    "serialize_record",
    "split_dataset",
    "stratified_sample",
    "validate_final_record",
    "validate_record",
]
