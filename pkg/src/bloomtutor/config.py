"""Service/CLI configuration: file (TOML or JSON) plus environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib  # type: ignore[no-redef]

from .gateway import DEFAULT_EMBED_DIM, Gateway, RemoteBackend, ScriptedBackend, ScriptEntry
from .search.web import FixtureSearchProvider, RemoteSearchProvider, SearchProvider

ENV_PREFIX = "BLOOMTUTOR_"


@dataclass
class ServiceConfig:
    backend_kind: str = "scripted"  # scripted | remote
    base_url: str = ""
    model: str = ""
    api_key: str = ""
    embed_model: str = ""
    embed_dim: int = DEFAULT_EMBED_DIM
    timeout_s: float = 60.0
    max_retries: int = 3
    search_kind: str = "none"  # none | fixture | remote
    search_endpoint: str = ""
    search_api_key: str = ""
    search_corpus: str = ""
    store_dir: str = "var/bloomtutor"
    assets_dir: str = ""
    host: str = "127.0.0.1"
    port: int = 8700
    idle_timeout_s: float = 1800.0
    extra: dict[str, Any] = field(default_factory=dict)


def load_config(path: str | Path | None = None, env: Mapping[str, str] | None = None) -> ServiceConfig:
    env = dict(os.environ if env is None else env)
    path = path or env.get(f"{ENV_PREFIX}CONFIG")
    data: dict[str, Any] = {}
    if path:
        text = Path(path).read_text(encoding="utf-8")
        if str(path).endswith(".json"):
            data = json.loads(text)
        else:
            data = tomllib.loads(text)

    cfg = ServiceConfig()
    for name in vars(cfg):
        if name == "extra":
            continue
        if name in data:
            setattr(cfg, name, type(getattr(cfg, name))(data[name]))
        env_key = f"{ENV_PREFIX}{name.upper()}"
        if env_key in env:
            setattr(cfg, name, type(getattr(cfg, name))(env[env_key]))
    cfg.extra = {k: v for k, v in data.items() if not hasattr(cfg, k)}
    return cfg


def build_gateway(cfg: ServiceConfig, script: list[ScriptEntry] | None = None) -> Gateway:
    if cfg.backend_kind == "scripted":
        return Gateway(ScriptedBackend(script or [], embed_dim=cfg.embed_dim))
    backend = RemoteBackend(
        base_url=cfg.base_url,
        model=cfg.model,
        api_key=cfg.api_key,
        embed_model=cfg.embed_model,
        embed_dim=cfg.embed_dim,
        timeout=cfg.timeout_s,
    )
    return Gateway(backend, max_retries=cfg.max_retries)


def build_search_provider(cfg: ServiceConfig) -> SearchProvider | None:
    if cfg.search_kind == "fixture" and cfg.search_corpus:
        return FixtureSearchProvider.from_directory(cfg.search_corpus)
    if cfg.search_kind == "remote" and cfg.search_endpoint:
        return RemoteSearchProvider(cfg.search_endpoint, api_key=cfg.search_api_key)
    return None
