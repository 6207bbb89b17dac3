from __future__ import annotations

import math

import pytest

from mmref.domain import (Assignment, CandidateObject, ResolutionResult, SceneObject,
                          SceneValidationError, Status, StatusVectors, scene_from_dict,
                          validate_scene)

SCHEMA = {"house": ["price", "size", "style", "color"], "town": ["population"]}


def house(object_id: str, x: float = 0.0, y: float = 0.0, **attributes) -> SceneObject:
    return SceneObject(object_id, "house", attributes, (x, y))


def test_wellformed_scene_accepted():
    scene = validate_scene([house("h1", price=100), house("h2", 10, 10)], SCHEMA)
    assert scene.ids == {"h1", "h2"}
    assert scene.by_id("h1").attributes["price"] == 100


def test_duplicate_id_reported():
    with pytest.raises(SceneValidationError) as exc:
        validate_scene([house("h1"), house("h1", 5, 5)], SCHEMA)
    assert [p.code for p in exc.value.problems] == ["DuplicateId"]
    assert exc.value.problems[0].detail["id"] == "h1"


def test_unknown_attribute_reported_against_type_schema():
    # population belongs to towns, not houses
    with pytest.raises(SceneValidationError) as exc:
        validate_scene([house("h1", population=5000)], SCHEMA)
    problem = exc.value.problems[0]
    assert problem.code == "UnknownAttribute"
    assert problem.detail == {"type": "house", "key": "population"}


def test_nonfinite_position_reported():
    bad = SceneObject("h1", "house", {}, (math.nan, 0.0))
    with pytest.raises(SceneValidationError) as exc:
        validate_scene([bad], SCHEMA)
    assert exc.value.problems[0].code == "NonFinitePosition"


def test_all_problems_collected_not_just_first():
    objs = [house("h1"), house("h1", 1, 1, population=3),
            SceneObject("h2", "house", {}, (float("inf"), 0.0))]
    with pytest.raises(SceneValidationError) as exc:
        validate_scene(objs, SCHEMA)
    codes = sorted(p.code for p in exc.value.problems)
    assert codes == ["DuplicateId", "NonFinitePosition", "UnknownAttribute"]


def test_scene_from_dict_round_trip():
    doc = {
        "capture_radius": 25,
        "schema": SCHEMA,
        "objects": [{"id": "h1", "type": "house",
                     "attributes": {"color": "green"},
                     "position": [3, 4], "visible": False}],
    }
    scene = scene_from_dict(doc)
    assert scene.capture_radius == 25
    assert scene.by_id("h1").visible is False
    assert scene.visible_objects() == []
    assert scene.as_dict()["objects"][0]["position"] == [3.0, 4.0]


def _candidate(object_id: str, status: Status, prob: float,
               gesture_index: int | None = None) -> CandidateObject:
    return CandidateObject(SceneObject(object_id, "house"), status, prob,
                           gesture_order_index=gesture_index,
                           gesture_begin_time=100.0 if gesture_index else None)


def test_status_vectors_reject_shared_ids_across_vectors():
    vectors = StatusVectors(
        g=[_candidate("h1", Status.GESTURE, 1.0, 1)],
        f=[_candidate("h1", Status.FOCUS, 1.0)],
    )
    with pytest.raises(ValueError, match="share object ids"):
        vectors.validate()


def test_status_vectors_allow_duplicate_object_within_gesture_vector():
    # one object selected by two distinct gestures
    vectors = StatusVectors(g=[_candidate("t2", Status.GESTURE, 0.4, 2),
                               _candidate("t2", Status.GESTURE, 0.3, 3)])
    vectors.validate()


def test_status_vectors_require_gesture_order_sorted():
    vectors = StatusVectors(g=[_candidate("h1", Status.GESTURE, 0.5, 2),
                               _candidate("h2", Status.GESTURE, 0.5, 1)])
    with pytest.raises(ValueError, match="ordered"):
        vectors.validate()


def test_status_vectors_reject_out_of_range_probability():
    vectors = StatusVectors(f=[_candidate("h1", Status.FOCUS, 1.5)])
    with pytest.raises(ValueError, match="probability"):
        vectors.validate()


def test_resolution_result_lookup_helpers():
    result = ResolutionResult(
        assignments={1: [Assignment("h8", 0.85, "focus")],
                     2: [Assignment("h3", 0.2, "gesture", gesture_index=1)]},
        unresolved=[3])
    assert result.assigned_ids(1) == {"h8"}
    assert result.assigned_ids(3) == set()
    assert result.all_assigned_ids() == {"h8", "h3"}
    payload = result.as_dict()
    assert payload["assignments"]["1"][0]["object"] == "h8"
    assert payload["unresolved"] == [3]
