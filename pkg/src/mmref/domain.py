"""Scene objects, referring expressions, gestures, and per-turn status vectors.

These are the value types every resolver consumes.  They are immutable after
construction and safe to share across concurrent evaluations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional, Union

Point = tuple[float, float]

SINGULAR = "singular"
PLURAL_UNNUMBERED = "plural-unnumbered"

# target_number is one of: None (unconstrained), an exact positive int,
# SINGULAR (exactly one), or PLURAL_UNNUMBERED (two or more, tolerating one).
NumberConstraint = Union[None, int, str]


class Status(str, Enum):
    """Cognitive status of a candidate referent within a turn."""

    GESTURE = "gesture"
    FOCUS = "focus"
    DISPLAY = "display"


class Category(str, Enum):
    """Six-way syntactic categorization of a referring expression."""

    EMPTY = "empty"
    PRONOUN = "pronoun"
    LOCATIVE = "locative"
    DEMONSTRATIVE = "demonstrative"
    DEFINITE = "definite"
    FULL = "full"


@dataclass(frozen=True)
class SceneObject:
    id: str
    semantic_type: str
    attributes: dict[str, Any] = field(default_factory=dict)
    position: Point = (0.0, 0.0)
    visible: bool = True


@dataclass(frozen=True)
class GestureEvent:
    kind: str  # "point" or "circle"
    focus_point: Point
    radius: float  # 0 for a point
    begin_time: float  # ms since session epoch
    end_time: float
    order_index: int  # 1-based within the turn


@dataclass(frozen=True)
class ReferringExpression:
    surface: str
    category: Category
    order_index: int
    begin_time: float
    target_identifier: Optional[str] = None
    target_semantic_type: Optional[str] = None
    target_number: NumberConstraint = None
    attribute_constraints: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class CandidateObject:
    """A scene object tagged with the status under which it may be referenced.

    gesture_order_index and gesture_begin_time are set iff status is GESTURE;
    the same object may appear more than once in a gesture vector when two
    gestures select it.
    """

    object: SceneObject
    status: Status
    selection_probability: float
    gesture_order_index: Optional[int] = None
    gesture_begin_time: Optional[float] = None


@dataclass
class StatusVectors:
    """The per-turn quadruple: gesture, focus, display candidates + expressions."""

    g: list[CandidateObject] = field(default_factory=list)
    f: list[CandidateObject] = field(default_factory=list)
    d: list[CandidateObject] = field(default_factory=list)
    r: list[ReferringExpression] = field(default_factory=list)

    def validate(self) -> None:
        for name, vec, status in (("g", self.g, Status.GESTURE),
                                  ("f", self.f, Status.FOCUS),
                                  ("d", self.d, Status.DISPLAY)):
            for c in vec:
                if c.status is not status:
                    raise ValueError(f"{name} holds candidate with status {c.status}")
                if not 0.0 <= c.selection_probability <= 1.0:
                    raise ValueError(f"selection probability out of range: {c}")
                if (c.gesture_order_index is not None) != (status is Status.GESTURE):
                    raise ValueError("gesture_order_index present iff status is gesture")
        ids_g = {c.object.id for c in self.g}
        ids_f = {c.object.id for c in self.f}
        ids_d = {c.object.id for c in self.d}
        if ids_g & ids_f or ids_g & ids_d or ids_f & ids_d:
            raise ValueError("status vectors share object ids")
        indices = [c.gesture_order_index for c in self.g]
        if any(b < a for a, b in zip(indices, indices[1:])):
            raise ValueError("gesture vector not ordered by gesture order index")


@dataclass(frozen=True)
class Assignment:
    object_id: str
    score: float
    source: str  # status the referent was drawn from, or "identifier"
    gesture_index: Optional[int] = None  # set when drawn from the gesture vector


@dataclass
class ResolutionResult:
    """Expression order_index -> referents, plus the indices left unresolved."""

    assignments: dict[int, list[Assignment]] = field(default_factory=dict)
    unresolved: list[int] = field(default_factory=list)
    reasons: dict[int, str] = field(default_factory=dict)
    flags: dict[str, Any] = field(default_factory=dict)
    score_evaluations: int = 0

    def assigned_ids(self, index: int) -> set[str]:
        return {a.object_id for a in self.assignments.get(index, [])}

    def all_assigned_ids(self) -> set[str]:
        return {a.object_id for group in self.assignments.values() for a in group}

    def as_dict(self) -> dict[str, Any]:
        return {
            "assignments": {
                str(i): [{"object": a.object_id, "score": a.score, "source": a.source}
                         for a in group]
                for i, group in sorted(self.assignments.items())
            },
            "unresolved": sorted(self.unresolved),
            "reasons": {str(i): r for i, r in sorted(self.reasons.items())},
            "flags": dict(self.flags),
        }


@dataclass(frozen=True)
class SceneProblem:
    code: str  # DuplicateId | UnknownAttribute | NonFinitePosition
    detail: dict[str, Any]


class SceneValidationError(ValueError):
    def __init__(self, problems: list[SceneProblem]):
        self.problems = problems
        summary = "; ".join(f"{p.code}({p.detail})" for p in problems)
        super().__init__(f"invalid scene: {summary}")


DEFAULT_CAPTURE_RADIUS = 30.0


@dataclass
class Scene:
    objects: list[SceneObject]
    schema: dict[str, list[str]]
    capture_radius: float = DEFAULT_CAPTURE_RADIUS

    def __post_init__(self) -> None:
        self._by_id = {o.id: o for o in self.objects}

    def by_id(self, object_id: str) -> SceneObject:
        return self._by_id[object_id]

    def get(self, object_id: str) -> Optional[SceneObject]:
        return self._by_id.get(object_id)

    @property
    def ids(self) -> set[str]:
        return set(self._by_id)

    def visible_objects(self) -> list[SceneObject]:
        return [o for o in self.objects if o.visible]

    def as_dict(self) -> dict[str, Any]:
        return {
            "capture_radius": self.capture_radius,
            "schema": {t: list(keys) for t, keys in self.schema.items()},
            "objects": [
                {
                    "id": o.id,
                    "type": o.semantic_type,
                    "attributes": dict(o.attributes),
                    "position": [o.position[0], o.position[1]],
                    "visible": o.visible,
                }
                for o in self.objects
            ],
        }


def validate_scene(objects: Iterable[SceneObject], schema: dict[str, list[str]],
                   capture_radius: float = DEFAULT_CAPTURE_RADIUS) -> Scene:
    """Check scene invariants, reporting every problem rather than the first."""
    problems: list[SceneProblem] = []
    seen: set[str] = set()
    for obj in objects:
        if obj.id in seen:
            problems.append(SceneProblem("DuplicateId", {"id": obj.id}))
        seen.add(obj.id)
        allowed = schema.get(obj.semantic_type)
        for key in obj.attributes:
            if allowed is None or key not in allowed:
                problems.append(SceneProblem(
                    "UnknownAttribute", {"type": obj.semantic_type, "key": key}))
        if not all(math.isfinite(v) for v in obj.position):
            problems.append(SceneProblem("NonFinitePosition", {"id": obj.id}))
    if problems:
        raise SceneValidationError(problems)
    return Scene(list(objects), dict(schema), capture_radius)


def scene_from_dict(doc: dict[str, Any]) -> Scene:
    objects = [
        SceneObject(
            id=str(rec["id"]),
            semantic_type=str(rec["type"]),
            attributes=dict(rec.get("attributes", {})),
            position=(float(rec["position"][0]), float(rec["position"][1])),
            visible=bool(rec.get("visible", True)),
        )
        for rec in doc.get("objects", [])
    ]
    schema = {t: list(keys) for t, keys in doc.get("schema", {}).items()}
    radius = float(doc.get("capture_radius", DEFAULT_CAPTURE_RADIUS))
    return validate_scene(objects, schema, radius)


def load_scene(path: Union[str, Path]) -> Scene:
    with open(path, "r", encoding="utf-8") as fh:
        return scene_from_dict(json.load(fh))
