"""Toolkit configuration file: INI-style UTF-8, ``[section]`` headers,
``key = value`` lines, ``#`` comments. Unknown sections or keys are
rejected; defaults follow the pipeline's published hyperparameters."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .cluster import ClusterConfig
from .reduce import ReduceConfig


class ConfigError(ValueError):
    pass


_SCHEMA = {
    "embedding": {"id_model": str, "max_seq_length": int, "batch_size": int},
    "umap": {"n_components": int, "min_dist": float, "metric": str,
             "n_neighbors": int, "n_epochs": int, "spread": float},
    "hdbscan": {"min_cluster_size": int, "metric": str, "min_samples": int},
    "vectorizer": {"ngram_min": int, "ngram_max": int, "min_df": int,
                   "stop_words": str},
    "topics": {"top_n_words": int, "diversity": float, "n_repr_docs": int},
    "coherence": {"window": int, "topn": int, "epsilon": float},
}

_DEFAULTS = {
    "embedding": {"id_model": "dlicari/distil-ita-legal-bert",
                  "max_seq_length": 512, "batch_size": 32},
    "umap": {"n_components": 5, "min_dist": 0.0, "metric": "cosine",
             "n_neighbors": 5, "n_epochs": 500, "spread": 1.0},
    "hdbscan": {"min_cluster_size": 5, "metric": "euclidean",
                "min_samples": 5},
    "vectorizer": {"ngram_min": 1, "ngram_max": 2, "min_df": 2,
                   "stop_words": ""},
    "topics": {"top_n_words": 15, "diversity": 0.35, "n_repr_docs": 3},
    "coherence": {"window": 110, "topn": 10, "epsilon": 1e-12},
}

_LLM_KEYS = {"endpoint": str, "model": str, "auth_header": str,
             "auth_env": str, "timeout": float, "retries": int,
             "backoff": float, "send_sampling_params": bool}


@dataclass
class ToolkitConfig:
    values: dict[str, dict] = field(default_factory=dict)
    llm_providers: dict[str, dict] = field(default_factory=dict)

    def section(self, name: str) -> dict:
        return self.values[name]

    def reduce_config(self, seed: int = 42) -> ReduceConfig:
        u = self.values["umap"]
        return ReduceConfig(n_neighbors=u["n_neighbors"],
                            n_components=u["n_components"],
                            min_dist=u["min_dist"], metric=u["metric"],
                            n_epochs=u["n_epochs"], spread=u["spread"],
                            seed=seed)

    def cluster_config(self) -> ClusterConfig:
        h = self.values["hdbscan"]
        return ClusterConfig(min_cluster_size=h["min_cluster_size"],
                             min_samples=h["min_samples"], metric=h["metric"])


def _coerce(section: str, key: str, raw: str, kind):
    try:
        if kind is bool:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return kind(raw)
    except ValueError:
        raise ConfigError(
            f"[{section}] {key}: cannot parse {raw!r} as {kind.__name__}")


def default_config() -> ToolkitConfig:
    return ToolkitConfig(values={s: dict(v) for s, v in _DEFAULTS.items()})


def load_config(path=None) -> ToolkitConfig:
    cfg = default_config()
    if path is None:
        return cfg
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",),
                                       comment_prefixes=("#",),
                                       interpolation=None)
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_file(f)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    for section in parser.sections():
        if section.startswith("llm."):
            name = section[len("llm."):]
            block = {}
            for key, raw in parser.items(section):
                if key not in _LLM_KEYS:
                    raise ConfigError(f"{path}: unknown key {key!r} in "
                                      f"[{section}]")
                block[key] = _coerce(section, key, raw, _LLM_KEYS[key])
            if "endpoint" not in block or "model" not in block:
                raise ConfigError(
                    f"{path}: [{section}] needs endpoint and model")
            cfg.llm_providers[name] = block
            continue
        if section not in _SCHEMA:
            raise ConfigError(f"{path}: unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(
                    f"{path}: unknown key {key!r} in [{section}]")
            cfg.values[section][key] = _coerce(section, key, raw,
                                               _SCHEMA[section][key])
    return cfg
