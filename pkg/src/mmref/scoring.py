"""Expression-object match scoring.

The score of pairing a candidate object with a referring expression is

    selectivity(object | status) * likelihood(status | expression category)
                                 * compatibility(object, expression)

selectivity is the gesture kernel probability, or uniform over the focus and
display vectors.  The status likelihood comes from a fixed per-category table
(no smoothing; the shipped default zeroes the visible row).  Compatibility is
a hard product of identifier, semantic-type, and attribute agreement with a
soft temporal alignment term.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Union

from .domain import CandidateObject, Category, ReferringExpression, Status, StatusVectors


class TemporalMode(str, Enum):
    ORDERING = "ordering"  # alignment of occurrence indices
    ABSOLUTE = "absolute"  # alignment of begin timestamps
    COMBINED = "combined"  # equal-weight mean of the two


class MissingTimestamp(ValueError):
    """Absolute temporal scoring needs begin times on both sides."""


@dataclass(frozen=True)
class LikelihoodTable:
    """P(status | expression category), keyed by the six categories.

    The display vector is looked up under the "visible" row.  Values are used
    exactly as loaded; renormalized() shifts each category's missing mass
    onto the visible row so display objects can ever win a match.
    """

    entries: dict[Category, dict[Status, float]]

    def lookup(self, category: Category, status: Status) -> float:
        return self.entries[category][status]

    def renormalized(self) -> "LikelihoodTable":
        entries = {}
        for category, row in self.entries.items():
            total = sum(row.values())
            missing = max(0.0, 1.0 - total)
            adjusted = dict(row)
            adjusted[Status.DISPLAY] = adjusted[Status.DISPLAY] + missing
            entries[category] = adjusted
        return LikelihoodTable(entries)


def likelihood_table_from_dict(doc: dict[str, Any]) -> LikelihoodTable:
    entries: dict[Category, dict[Status, float]] = {}
    for name, row in doc.items():
        category = Category(name.lower())
        entries[category] = {
            Status.GESTURE: float(row["gesture"]),
            Status.FOCUS: float(row["focus"]),
            Status.DISPLAY: float(row["visible"]),
        }
    missing = set(Category) - set(entries)
    if missing:
        raise ValueError(f"likelihood table missing categories: {sorted(c.value for c in missing)}")
    for category, row in entries.items():
        for status, value in row.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"likelihood out of range for ({category}, {status}): {value}")
    return LikelihoodTable(entries)


def load_likelihood_table(path: Union[str, Path]) -> LikelihoodTable:
    with open(path, "r", encoding="utf-8") as fh:
        return likelihood_table_from_dict(json.load(fh))


@dataclass(frozen=True)
class ResolverConfig:
    """Knobs shared by the greedy resolver and the graph matcher."""

    temporal_mode: TemporalMode = TemporalMode.ORDERING
    tau_ms: float = 1000.0  # decay scale for absolute temporal alignment
    ablate_cognitive: bool = False  # score by compatibility alone
    renormalize_table: bool = False
    # graph matcher only:
    threshold: float = 0.5
    max_iter: int = 100
    tol: float = 1e-4

    def with_mode(self, mode: TemporalMode) -> "ResolverConfig":
        return replace(self, temporal_mode=mode)


def config_from_dict(doc: dict[str, Any]) -> ResolverConfig:
    known = {f: doc[f] for f in
             ("tau_ms", "ablate_cognitive", "renormalize_table",
              "threshold", "max_iter", "tol") if f in doc}
    if "temporal_mode" in doc:
        known["temporal_mode"] = TemporalMode(doc["temporal_mode"])
    return ResolverConfig(**known)


def status_likelihood(category: Category, status: Status,
                      table: LikelihoodTable) -> float:
    """Exact table lookup; no smoothing."""
    return table.lookup(category, status)


def object_selectivity(candidate: CandidateObject, vectors: StatusVectors) -> float:
    """P(object | its status): kernel weight for gestures, else uniform."""
    if candidate.status is Status.GESTURE:
        return candidate.selection_probability
    if candidate.status is Status.FOCUS:
        return 1.0 / len(vectors.f)
    return 1.0 / len(vectors.d)


_NUMBER_WORDS = {
    "zero": "0", "one": "1", "two": "2", "three": "3", "four": "4",
    "five": "5", "six": "6", "seven": "7", "eight": "8", "nine": "9",
    "ten": "10", "eleven": "11", "twelve": "12",
}


def canonical_identifier(raw: str) -> str:
    word = re.sub(r"[\s_-]+", "", raw.strip().lower())
    return _NUMBER_WORDS.get(word, word)


def identifier_match(object_id: str, target_identifier: Optional[str]) -> float:
    """1.0 when the expression names this object (or names nothing), else 0.

    Spoken identifiers are usually bare ("eight"), object ids usually typed
    ("h8"); a purely numeric target also matches an id whose single digit run
    equals it.
    """
    if target_identifier is None:
        return 1.0
    target = canonical_identifier(target_identifier)
    oid = canonical_identifier(object_id)
    if target == oid:
        return 1.0
    if target.isdigit():
        runs = re.findall(r"\d+", oid)
        if len(runs) == 1 and str(int(runs[0])) == str(int(target)):
            return 1.0
    return 0.0


def _values_equal(a: Any, b: Any) -> bool:
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return float(a) == float(b)
    return str(a).lower() == str(b).lower()


@dataclass(frozen=True)
class CompatibilityFactors:
    identifier: float
    semantic: float
    attributes: float
    temporal: float

    @property
    def product(self) -> float:
        return self.identifier * self.semantic * self.attributes * self.temporal

    def as_dict(self) -> dict[str, float]:
        return {"identifier": self.identifier, "semantic": self.semantic,
                "attributes": self.attributes, "temporal": self.temporal}


def temporal_compatibility(candidate: CandidateObject, expression: ReferringExpression,
                           mode: TemporalMode, tau_ms: float = 1000.0) -> float:
    """Alignment score in (0, 1]; focus and display objects always score 1."""
    if candidate.status is not Status.GESTURE:
        return 1.0
    if mode is TemporalMode.ORDERING:
        return math.exp(-abs(candidate.gesture_order_index - expression.order_index))
    if mode is TemporalMode.ABSOLUTE:
        return _absolute_temporal(candidate, expression, tau_ms)
    ordering = math.exp(-abs(candidate.gesture_order_index - expression.order_index))
    return 0.5 * (ordering + _absolute_temporal(candidate, expression, tau_ms))


def _absolute_temporal(candidate: CandidateObject, expression: ReferringExpression,
                       tau_ms: float) -> float:
    if candidate.gesture_begin_time is None or expression.begin_time is None:
        raise MissingTimestamp(
            f"absolute temporal mode requires begin times "
            f"(object {candidate.object.id}, expression {expression.order_index})")
    delta = abs(candidate.gesture_begin_time - expression.begin_time)
    return math.exp(-delta / tau_ms)


def compatibility_factors(candidate: CandidateObject, expression: ReferringExpression,
                          mode: TemporalMode = TemporalMode.ORDERING,
                          tau_ms: float = 1000.0) -> CompatibilityFactors:
    obj = candidate.object
    ident = identifier_match(obj.id, expression.target_identifier)
    if expression.target_semantic_type is None:
        sem = 1.0
    else:
        sem = 1.0 if obj.semantic_type.lower() == expression.target_semantic_type.lower() else 0.0
    attrs = 1.0
    for key, wanted in expression.attribute_constraints.items():
        if key in obj.attributes and not _values_equal(obj.attributes[key], wanted):
            attrs = 0.0
            break
    temp = temporal_compatibility(candidate, expression, mode, tau_ms)
    return CompatibilityFactors(ident, sem, attrs, temp)


def compatibility(candidate: CandidateObject, expression: ReferringExpression,
                  mode: TemporalMode = TemporalMode.ORDERING,
                  tau_ms: float = 1000.0) -> float:
    return compatibility_factors(candidate, expression, mode, tau_ms).product


def match_score(candidate: CandidateObject, expression: ReferringExpression,
                vectors: StatusVectors, table: LikelihoodTable,
                config: ResolverConfig) -> float:
    """The full pair score; with ablation, the cognitive factors drop out."""
    compat = compatibility(candidate, expression, config.temporal_mode, config.tau_ms)
    if config.ablate_cognitive:
        return compat
    selectivity = object_selectivity(candidate, vectors)
    likelihood = status_likelihood(expression.category, candidate.status, table)
    return selectivity * likelihood * compat


@dataclass
class ScoreMatrix:
    """Pair scores for one status class: rows are candidates, columns expressions."""

    rows: list[CandidateObject]
    cols: list[ReferringExpression]
    cells: list[list[float]] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))


def build_score_matrix(candidates: list[CandidateObject], vectors: StatusVectors,
                       table: LikelihoodTable, config: ResolverConfig,
                       counter: Optional[list[int]] = None) -> ScoreMatrix:
    matrix = ScoreMatrix(rows=list(candidates), cols=list(vectors.r))
    for cand in candidates:
        matrix.cells.append([match_score(cand, expr, vectors, table, config)
                             for expr in vectors.r])
        if counter is not None:
            counter[0] += len(vectors.r)
    return matrix
