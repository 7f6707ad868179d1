"""Service configuration: TOML file + environment overrides."""

from __future__ import annotations

import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping

from .embedding import EmbeddingProvider, RemoteEmbedder, TrigramEmbedder
from .errors import StorageFailure
from .matching import DEFAULT_THRESHOLD

ENV_WORKSPACE = "FACTALIGN_WORKSPACE"
ENV_PROVIDER_URL = "FACTALIGN_PROVIDER_URL"

# Setting key under which `calibrate --apply` stores the calibrated threshold.
THRESHOLD_SETTING = "threshold"


@dataclass(frozen=True)
class ServiceConfig:
    """Everything the API server and the CLI need to run.

    ``provider`` selects the embedding backend: "trigram" for the built-in
    hashed-trigram embedder, "remote" for an HTTP embedding service, or
    "auto" (the default) which picks "remote" exactly when ``provider_url``
    is set.
    """

    workspace: str = "workspace"
    host: str = "127.0.0.1"
    port: int = 8787
    provider: str = "auto"
    provider_url: str = ""
    provider_timeout: float = 30.0
    provider_dimension: int = 256
    threshold: float = DEFAULT_THRESHOLD
    clustering_threshold: float = 0.8
    quorum: float = 0.5
    language: str = "en"

    def validate(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {self.threshold}")
        if not 0.0 <= self.clustering_threshold <= 1.0:
            raise ValueError(
                f"clustering_threshold must be in [0, 1], got {self.clustering_threshold}"
            )
        if not 0.0 < self.quorum <= 1.0:
            raise ValueError(f"quorum must be in (0, 1], got {self.quorum}")
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port must be in [1, 65535], got {self.port}")
        if self.provider not in ("auto", "trigram", "remote"):
            raise ValueError(f"unknown provider {self.provider!r}")
        if self.provider == "remote" and not self.provider_url:
            raise ValueError("provider 'remote' requires provider_url")
        if self.provider_timeout <= 0:
            raise ValueError(f"provider_timeout must be positive, got {self.provider_timeout}")
        if self.language not in ("en", "de"):
            raise ValueError(f"unsupported language {self.language!r}")


_FIELD_TYPES: dict[str, type] = {
    "workspace": str,
    "host": str,
    "port": int,
    "provider": str,
    "provider_url": str,
    "provider_timeout": float,
    "provider_dimension": int,
    "threshold": float,
    "clustering_threshold": float,
    "quorum": float,
    "language": str,
}


def _coerce(key: str, value: Any) -> Any:
    want = _FIELD_TYPES[key]
    if want is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, want) or isinstance(value, bool):
        raise ValueError(f"config key {key!r} expects {want.__name__}, got {value!r}")
    return value


def load_config(path: str | os.PathLike[str] | None = None,
                env: Mapping[str, str] | None = None) -> ServiceConfig:
    """Build a ServiceConfig from a TOML file plus environment overrides.

    With ``path=None`` the file ``factalign.toml`` in the working directory is
    used if present, otherwise defaults apply. An explicitly given path must
    exist. Environment variables override file values.
    """
    if env is None:
        env = os.environ
    data: dict[str, Any] = {}
    toml_path = Path(path) if path is not None else Path("factalign.toml")
    if path is not None and not toml_path.is_file():
        raise StorageFailure(f"config file not found: {toml_path}")
    if toml_path.is_file():
        try:
            raw = tomllib.loads(toml_path.read_text(encoding="utf-8"))
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise StorageFailure(f"cannot read config {toml_path}: {exc}") from exc
        known = {f.name for f in fields(ServiceConfig)}
        for key, value in raw.items():
            if key not in known:
                raise ValueError(f"unknown config key {key!r} in {toml_path}")
            data[key] = _coerce(key, value)
    config = ServiceConfig(**data)
    if env.get(ENV_WORKSPACE):
        config = replace(config, workspace=env[ENV_WORKSPACE])
    if env.get(ENV_PROVIDER_URL):
        config = replace(config, provider_url=env[ENV_PROVIDER_URL])
    config.validate()
    return config


def make_provider(config: ServiceConfig) -> EmbeddingProvider:
    """Instantiate the embedding backend the config asks for."""
    kind = config.provider
    if kind == "auto":
        kind = "remote" if config.provider_url else "trigram"
    if kind == "remote":
        if not config.provider_url:
            raise ValueError("provider 'remote' requires provider_url")
        return RemoteEmbedder(config.provider_url, config.provider_dimension,
                              timeout=config.provider_timeout)
    return TrigramEmbedder(config.provider_dimension)


def effective_threshold(config: ServiceConfig, settings_value: Any) -> float:
    """Resolve the matching threshold for a workspace.

    A calibrated value stored in the workspace settings (via
    ``calibrate --apply``) wins over the config file; the config value is the
    fallback.
    """
    if settings_value is None:
        return config.threshold
    value = float(settings_value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"stored threshold out of range: {value}")
    return value
