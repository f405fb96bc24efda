"""soograph: a desk-scale bibliographic search engine with second-order
operators (useful, reviews, trending, similar), a fielded query language,
citation/coupling networks, and co-read trend analysis."""

from soograph.config import Config, load_config
from soograph.engine import Engine
from soograph.evaluate import evaluate
from soograph.query import parse, to_canonical_string
from soograph.results import RankedEntry, RankedList, Score
from soograph.store import CorpusStore, Document, Library, ReadEvent
from soograph.synth import SynthParams, anchor_date, generate

__all__ = [
    "Config", "load_config", "Engine", "evaluate", "parse",
    "to_canonical_string", "RankedEntry", "RankedList", "Score",
    "CorpusStore", "Document", "Library", "ReadEvent",
    "SynthParams", "anchor_date", "generate",
]

__version__ = "0.1.0"
