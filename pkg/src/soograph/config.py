"""Engine configuration with file loading (``key=value`` lines)."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path


@dataclass
class Config:
    # BM25 ranking
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    # Scoring: title tokens count double; citation/read boosts; SOO blend weight
    title_weight: float = 2.0
    cite_alpha: float = 0.1
    read_beta: float = 0.1
    blend: float = 0.5
    # Reader activity window and thresholds for trending
    window_days: int = 90
    min_docs: int = 5
    max_docs: int = 500
    # Second-order operators
    soo_cap: int = 200          # overridable only to make cap tests tractable
    similar_terms: int = 25     # query-term budget for the similarity pseudo-document
    # Network view
    netviz_min_weight: int = 1
    # Optional token=canonical synonym file
    synonyms_path: str | None = None


# dotted config-file keys -> dataclass attributes
_KEYMAP = {
    "bm25.k1": "bm25_k1",
    "bm25.b": "bm25_b",
    "score.title_weight": "title_weight",
    "score.cite_alpha": "cite_alpha",
    "score.read_beta": "read_beta",
    "score.blend": "blend",
    "trending.window_days": "window_days",
    "trending.min_docs": "min_docs",
    "trending.max_docs": "max_docs",
    "soo.cap": "soo_cap",
    "similar.terms": "similar_terms",
    "netviz.min_weight": "netviz_min_weight",
    "synonyms.path": "synonyms_path",
}

_TYPES = {f.name: f.type for f in fields(Config)}


def load_config(path: str | Path | None = None, overrides: dict[str, str] | None = None) -> Config:
    """Build a Config from an optional ``key=value`` file plus overrides.

    Unknown keys raise ValueError so typos in config files fail loudly.
    """
    cfg = Config()
    pairs: list[tuple[str, str]] = []
    if path is not None:
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line (expected key=value): {line!r}")
            key, value = line.split("=", 1)
            pairs.append((key.strip(), value.strip()))
    for key, value in (overrides or {}).items():
        pairs.append((key, value))
    for key, value in pairs:
        attr = _KEYMAP.get(key)
        if attr is None:
            raise ValueError(f"unknown config key: {key}")
        cfg_field = _TYPES[attr]
        if attr == "synonyms_path":
            setattr(cfg, attr, value or None)
        elif cfg_field in ("int", int):
            setattr(cfg, attr, int(value))
        else:
            setattr(cfg, attr, float(value))
    return cfg
