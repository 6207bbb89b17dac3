"""Access to the packaged default lexicon, likelihood table, scenes, corpora."""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

from .domain import Scene, scene_from_dict
from .parsing import Lexicon, lexicon_from_dict
from .scoring import LikelihoodTable, likelihood_table_from_dict

_SCENES = {"golden": "scenes/golden.json", "grid": "scenes/grid.json"}
_CORPORA = {
    "golden": "corpora/golden.jsonl",
    "regression": "corpora/regression.jsonl",
    "focus-stress": "corpora/focus_stress.jsonl",
}


def _read_text(relpath: str) -> str:
    return resources.files("mmref.data").joinpath(relpath).read_text(encoding="utf-8")


def default_lexicon() -> Lexicon:
    return lexicon_from_dict(json.loads(_read_text("lexicon.json")))


def default_likelihood_table() -> LikelihoodTable:
    return likelihood_table_from_dict(json.loads(_read_text("status_likelihoods.json")))


def builtin_scene_names() -> list[str]:
    return sorted(_SCENES)


def builtin_scene(name: str) -> Scene:
    if name not in _SCENES:
        raise KeyError(f"unknown builtin scene {name!r}; have {builtin_scene_names()}")
    return scene_from_dict(json.loads(_read_text(_SCENES[name])))


def builtin_corpus_names() -> list[str]:
    return sorted(_CORPORA)


def builtin_corpus_text(name: str) -> str:
    if name not in _CORPORA:
        raise KeyError(f"unknown builtin corpus {name!r}; have {builtin_corpus_names()}")
    return _read_text(_CORPORA[name])


def builtin_corpus_records(name: str) -> list[dict[str, Any]]:
    return [json.loads(line) for line in builtin_corpus_text(name).splitlines() if line.strip()]
