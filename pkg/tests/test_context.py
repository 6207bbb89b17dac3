from __future__ import annotations

import random

import pytest

from conftest import golden_events, point_event, token_event, utterance_events
from mmref.context import (Event, SessionState, build_status_vectors, segment_turns,
                           update_focus)
from mmref.domain import Assignment, Category, ResolutionResult


def instant(kind: str, t: float) -> Event:
    if kind == "token":
        return token_event(f"w{t}", t, duration=0)
    return point_event(0, 0, t, duration=0)


def test_gap_beyond_timeout_splits_turns():
    events = [instant("token", t) for t in (0, 500, 900, 3500)]
    turns = segment_turns(events, idle_timeout=2000)
    assert [len(t.tokens) for t in turns] == [3, 1]
    assert turns[1].tokens[0].begin_time == 3500


def test_gap_exactly_at_timeout_stays_one_turn():
    events = [instant("token", 0), instant("token", 2000)]
    assert len(segment_turns(events, idle_timeout=2000)) == 1


def test_single_event_single_turn():
    assert len(segment_turns([instant("gesture", 10)])) == 1


def test_mixed_modalities_within_timeout_stay_together():
    events = [token_event("hi", 0, duration=800), point_event(1, 1, 1200),
              token_event("there", 1500)]
    turns = segment_turns(events, idle_timeout=2000)
    assert len(turns) == 1
    assert len(turns[0].tokens) == 2 and len(turns[0].gestures) == 1


def test_gap_measured_from_latest_end_not_begin():
    # long first event: its end keeps the stream alive
    events = [token_event("long", 0, duration=3000), token_event("next", 4000)]
    assert len(segment_turns(events, idle_timeout=2000)) == 1


def test_end_turn_event_forces_boundary_and_is_consumed():
    events = [instant("token", 0), Event("end-turn", 100, 100, {}),
              instant("token", 200)]
    turns = segment_turns(events)
    assert [len(t.tokens) for t in turns] == [1, 1]


def test_segmentation_preserves_every_event():
    rng = random.Random(5)
    t, events = 0.0, []
    for _ in range(200):
        t += rng.choice((100, 400, 2500))
        events.append(instant(rng.choice(("token", "gesture")), t))
    turns = segment_turns(events)
    rebuilt = sum(len(t.tokens) + len(t.gestures) for t in turns)
    assert rebuilt == len(events)
    times = [e.begin_time for t in turns for e in
             sorted(list(t.tokens) + list(t.gestures), key=lambda x: x.begin_time)]
    assert times == sorted(e.begin_time for e in events)


def test_gesture_order_indices_assigned_by_time():
    events = [point_event(0, 0, 500), point_event(1, 1, 0)]
    turn = segment_turns(events)[0]
    assert [(g.order_index, g.begin_time) for g in turn.gestures] == [(1, 0), (2, 500)]


def test_golden_turn_vectors_have_documented_sizes(golden_scene, lexicon):
    turns = segment_turns(golden_events())
    assert len(turns) == 2
    state = SessionState(scene=golden_scene, focus_ids={"h8"})
    vectors = build_status_vectors(turns[1], state, lexicon)
    assert (len(vectors.g), len(vectors.f), len(vectors.d), len(vectors.r)) == (6, 1, 8, 2)
    assert vectors.f[0].object.id == "h8"
    assert vectors.f[0].selection_probability == 1.0
    assert all(c.selection_probability == pytest.approx(1 / 8) for c in vectors.d)
    assert [c.object.id for c in vectors.g] == ["h3", "t1", "h9", "t2", "h1", "t2"]


def test_focus_object_reselected_by_gesture_stays_in_g_only(golden_scene, lexicon):
    turn = segment_turns([point_event(400, 300, 0)] +
                         utterance_events("this house", 300))[0]
    state = SessionState(scene=golden_scene, focus_ids={"h8"})
    vectors = build_status_vectors(turn, state, lexicon)
    assert [c.object.id for c in vectors.g] == ["h8"]
    assert vectors.f == []


def test_focus_and_display_probabilities_sum_to_one(golden_scene, lexicon):
    turn = segment_turns(utterance_events("how much is it", 0))[0]
    state = SessionState(scene=golden_scene, focus_ids={"h3", "h9"})
    vectors = build_status_vectors(turn, state, lexicon)
    assert sum(c.selection_probability for c in vectors.f) == pytest.approx(1.0)
    assert sum(c.selection_probability for c in vectors.d) == pytest.approx(1.0)


def test_empty_expression_synthesized_for_contentful_turn(golden_scene, lexicon):
    turn = segment_turns(utterance_events("how large", 0))[0]
    state = SessionState(scene=golden_scene)
    vectors = build_status_vectors(turn, state, lexicon)
    assert len(vectors.r) == 1
    assert vectors.r[0].category is Category.EMPTY
    assert vectors.r[0].order_index == 1


def test_update_focus_replaces_with_assigned_ids(golden_scene):
    state = SessionState(scene=golden_scene, focus_ids={"h8"})
    result = ResolutionResult(assignments={
        1: [Assignment("h8", 0.85, "focus")],
        2: [Assignment("h3", 0.2, "gesture"), Assignment("h9", 0.5, "gesture"),
            Assignment("h1", 0.2, "gesture")]})
    updated = update_focus(state, result)
    assert updated.focus_ids == {"h8", "h3", "h9", "h1"}
    assert updated.turn_counter == 1
    assert state.focus_ids == {"h8"}  # original untouched


def test_update_focus_keeps_previous_focus_on_empty_result(golden_scene):
    state = SessionState(scene=golden_scene, focus_ids={"h8"})
    updated = update_focus(state, ResolutionResult(unresolved=[1]))
    assert updated.focus_ids == {"h8"}


def test_first_turn_focus_starts_empty(golden_scene):
    assert SessionState(scene=golden_scene).focus_ids == set()


def test_session_state_rejects_unknown_focus_ids(golden_scene):
    with pytest.raises(ValueError):
        SessionState(scene=golden_scene, focus_ids={"nope"})
