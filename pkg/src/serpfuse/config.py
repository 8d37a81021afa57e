"""Application configuration: engines, weights, fetch policy, and paths.

Relative paths in a config file are resolved against the file's own
directory, so a bundled fixture tree works from any working directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .backends import EngineConfig, EngineMode
from .errors import ConfigError
from .ranker import WeightVector
from .retriever import FetchPolicy


class AppMode(str, Enum):
    OFFLINE = "offline"
    LIVE = "live"


@dataclass
class AppConfig:
    engines: list[EngineConfig]
    weights: WeightVector = field(default_factory=WeightVector.uniform)
    fetch_policy: FetchPolicy = field(default_factory=FetchPolicy)
    mode: AppMode = AppMode.OFFLINE
    fixture_dir: Path | None = None
    thesaurus_path: Path | None = None
    ratings_path: Path = Path("ratings.ndjson")
    judgments_path: Path | None = None
    listen_address: str = "127.0.0.1:8020"
    use_pagerank_links: bool = False
    ui_dir: Path | None = None

    def __post_init__(self):
        if not self.engines:
            raise ConfigError("at least one engine must be configured")
        if self.mode is AppMode.OFFLINE and self.fixture_dir is None:
            raise ConfigError("offline mode requires fixture_dir")
        if self.mode is AppMode.LIVE and not any(
            e.mode is EngineMode.LIVE for e in self.engines
        ):
            raise ConfigError("live mode requires at least one live engine")

    @property
    def corpus_manifest(self) -> Path | None:
        if self.fixture_dir is None:
            return None
        manifest = self.fixture_dir / "corpus" / "manifest.json"
        return manifest if manifest.is_file() else None


def load_config(path: str | Path) -> AppConfig:
    """Load AppConfig from a UTF-8 JSON file."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc

    base = path.parent

    def resolve(value: str | None) -> Path | None:
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else base / p

    engines = []
    for entry in raw.get("engines", []):
        engines.append(
            EngineConfig(
                engine_id=entry["engine_id"],
                mode=EngineMode(entry.get("mode", "fixture")),
                fixture_dir=str(resolve(entry.get("fixture_dir"))) if entry.get("fixture_dir") else None,
                endpoint=entry.get("endpoint"),
                credential_env=entry.get("credential_env"),
                page_size=int(entry.get("page_size", 10)),
            )
        )

    weights = WeightVector(raw["weights"]) if "weights" in raw else WeightVector.uniform()
    fetch_policy = FetchPolicy(**raw["fetch_policy"]) if "fetch_policy" in raw else FetchPolicy()

    return AppConfig(
        engines=engines,
        weights=weights,
        fetch_policy=fetch_policy,
        mode=AppMode(raw.get("mode", "offline")),
        fixture_dir=resolve(raw.get("fixture_dir")),
        thesaurus_path=resolve(raw.get("thesaurus_path")),
        ratings_path=resolve(raw.get("ratings_path")) or Path("ratings.ndjson"),
        judgments_path=resolve(raw.get("judgments_path")),
        listen_address=raw.get("listen_address", "127.0.0.1:8020"),
        use_pagerank_links=bool(raw.get("use_pagerank_links", False)),
        ui_dir=resolve(raw.get("ui_dir")),
    )
