"""Run configuration: a flat key = value file, environment overrides, and a
content digest for the run manifest."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Mapping, Optional

from .errors import ConfigError
from .model import (
    MAX_QUESTION_WORDS,
    MIN_HINTS_FINAL,
    MIN_QUESTION_WORDS,
    SIMILARITY_THRESHOLD,
)

ENV_PREFIX = "HINTKIT_"

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class PipelineConfig:
    """Everything a pipeline run needs, with the toolkit defaults baked in."""

    # Provider endpoints and model names (unused when offline).
    chat_base_url: str = ""
    chat_model: str = "default-chat"
    embed_base_url: str = ""
    embed_model: str = "default-embed"
    pageview_base_url: str = "https://wikimedia.org/api/rest_v1"
    wiki_api_url: str = "https://en.wikipedia.org/w/api.php"
    api_key_env: str = "HINTKIT_API_KEY"

    # Pipeline knobs.
    similarity_threshold: float = SIMILARITY_THRESHOLD
    hints_per_question: int = 10
    min_hints: int = MIN_HINTS_FINAL
    candidate_count: int = 11
    sample_fraction: float = 1.0
    seed: int = 13
    aggregate_mode: str = "avg"
    classifier: str = "keyword"  # keyword | chat
    parallelism: int = 4

    # Offline replay and supporting data files.
    offline: bool = False
    fixture_path: str = ""
    cache_path: str = ""
    gazetteer_path: str = ""
    calibration_path: str = ""

    def __post_init__(self):
        if not 0.0 < self.similarity_threshold <= 1.0:
            raise ConfigError(
                f"similarity_threshold must be in (0, 1], got {self.similarity_threshold}"
            )
        if self.hints_per_question < 1:
            raise ConfigError("hints_per_question must be >= 1")
        if self.min_hints < 1:
            raise ConfigError("min_hints must be >= 1")
        if self.candidate_count < 1:
            raise ConfigError("candidate_count must be >= 1")
        if not 0.0 < self.sample_fraction <= 1.0:
            raise ConfigError(
                f"sample_fraction must be in (0, 1], got {self.sample_fraction}"
            )
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.aggregate_mode not in ("min", "avg", "max"):
            raise ConfigError(f"aggregate_mode must be min/avg/max, got {self.aggregate_mode!r}")
        if self.classifier not in ("keyword", "chat"):
            raise ConfigError(f"classifier must be keyword/chat, got {self.classifier!r}")
        if self.offline:
            if not self.fixture_path:
                raise ConfigError("offline runs require fixture_path")
            if not self.gazetteer_path:
                raise ConfigError("offline runs require gazetteer_path")

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def _coerce(name: str, raw: str, target_type: type):
    raw = raw.strip()
    if target_type is bool:
        lowered = raw.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise ConfigError(f"{name}: expected a boolean, got {raw!r}")
    try:
        if target_type is int:
            return int(raw)
        if target_type is float:
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{name}: expected {target_type.__name__}, got {raw!r}") from exc
    if (raw.startswith('"') and raw.endswith('"')) or (
        raw.startswith("'") and raw.endswith("'")
    ):
        raw = raw[1:-1]
    return raw


def parse_config_text(text: str, env: Optional[Mapping[str, str]] = None) -> PipelineConfig:
    """Parse ``key = value`` lines ('#' comments, blank lines ignored).

    Environment variables named HINTKIT_<KEY-IN-UPPERCASE> override file
    values, so secrets and per-machine endpoints never need to live in the
    file.
    """
    env = os.environ if env is None else env
    known = {f.name: type(getattr(PipelineConfig(), f.name)) for f in fields(PipelineConfig)}
    values: dict = {}
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {i}: expected key = value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in known:
            raise ConfigError(f"line {i}: unknown key {key!r}")
        values[key] = _coerce(key, raw, known[key])
    for key, target_type in known.items():
        override = env.get(f"{ENV_PREFIX}{key.upper()}")
        if override is not None:
            values[key] = _coerce(key, override, target_type)
    return PipelineConfig(**values)


def load_config(path: str | Path, env: Optional[Mapping[str, str]] = None) -> PipelineConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, env=env)
