from __future__ import annotations

import json
import math
from importlib import resources

import pytest

from mmref.domain import (CandidateObject, Category, ReferringExpression, SceneObject,
                          Status, StatusVectors)
from mmref.scoring import (MissingTimestamp, ResolverConfig,
                           TemporalMode, compatibility, compatibility_factors,
                           identifier_match, match_score, object_selectivity,
                           status_likelihood)

# The shipped estimates: columns are expression categories, rows statuses.
EXPECTED_CELLS = {
    Category.EMPTY: (0.44, 0.56, 0.0),
    Category.PRONOUN: (0.15, 0.85, 0.0),
    Category.LOCATIVE: (0.43, 0.57, 0.0),
    Category.DEMONSTRATIVE: (0.67, 0.33, 0.0),
    Category.DEFINITE: (0.67, 0.07, 0.0),
    Category.FULL: (0.16, 0.47, 0.0),
}


def expr(category=Category.PRONOUN, order=1, begin=5000.0, **kwargs):
    return ReferringExpression(surface="x", category=category, order_index=order,
                               begin_time=begin, **kwargs)


def cand(status=Status.GESTURE, prob=1.0, order=1, begin=1000.0,
         object_id="h1", semantic_type="house", attributes=None):
    return CandidateObject(
        SceneObject(object_id, semantic_type, attributes or {}),
        status, prob,
        gesture_order_index=order if status is Status.GESTURE else None,
        gesture_begin_time=begin if status is Status.GESTURE else None)


def vectors_with(candidate, extra_f=0, extra_d=0):
    f, d = [], []
    if candidate.status is Status.FOCUS:
        f = [candidate]
    f += [cand(Status.FOCUS, 1.0, object_id=f"f{i}") for i in range(extra_f)]
    if candidate.status is Status.DISPLAY:
        d = [candidate]
    d += [cand(Status.DISPLAY, 1.0, object_id=f"d{i}") for i in range(extra_d)]
    g = [candidate] if candidate.status is Status.GESTURE else []
    return StatusVectors(g=g, f=f, d=d, r=[expr()])


def test_every_shipped_likelihood_cell(table):
    for category, (gesture, focus, visible) in EXPECTED_CELLS.items():
        assert status_likelihood(category, Status.GESTURE, table) == gesture
        assert status_likelihood(category, Status.FOCUS, table) == focus
        assert status_likelihood(category, Status.DISPLAY, table) == visible


def test_table_rejects_missing_category():
    from mmref.scoring import likelihood_table_from_dict

    with pytest.raises(ValueError, match="missing categories"):
        likelihood_table_from_dict({"pronoun": {"gesture": 1, "focus": 0, "visible": 0}})


def test_renormalized_table_moves_missing_mass_to_visible(table):
    adjusted = table.renormalized()
    # definite column sums to 0.74 verbatim; the gap lands on the visible row
    assert adjusted.lookup(Category.DEFINITE, Status.DISPLAY) == pytest.approx(0.26)
    assert adjusted.lookup(Category.FULL, Status.DISPLAY) == pytest.approx(0.37)
    # already-complete columns are untouched
    assert adjusted.lookup(Category.PRONOUN, Status.DISPLAY) == 0.0
    assert adjusted.lookup(Category.DEFINITE, Status.GESTURE) == 0.67


def test_selectivity_by_status():
    focus = cand(Status.FOCUS)
    assert object_selectivity(focus, vectors_with(focus)) == 1.0
    display = cand(Status.DISPLAY)
    assert object_selectivity(display, vectors_with(display, extra_d=7)) == pytest.approx(1 / 8)
    gesture = cand(Status.GESTURE, prob=0.5)
    assert object_selectivity(gesture, vectors_with(gesture)) == 0.5


def test_ordering_temporal_decay_matches_exponential():
    for delta in range(0, 6):
        c = cand(order=1)
        e = expr(order=1 + delta)
        got = compatibility_factors(c, e, TemporalMode.ORDERING).temporal
        assert got == pytest.approx(math.exp(-delta), abs=1e-12)


def test_focus_and_display_temporal_always_one():
    for status in (Status.FOCUS, Status.DISPLAY):
        c = cand(status)
        for mode in TemporalMode:
            assert compatibility_factors(c, expr(order=4), mode).temporal == 1.0


def test_absolute_temporal_uses_tau_scale():
    c = cand(begin=1000.0)
    e = expr(begin=3500.0)
    got = compatibility_factors(c, e, TemporalMode.ABSOLUTE, tau_ms=1000.0).temporal
    assert got == pytest.approx(math.exp(-2.5), abs=1e-12)


def test_absolute_temporal_requires_timestamps():
    c = CandidateObject(SceneObject("h1", "house"), Status.GESTURE, 1.0,
                        gesture_order_index=1, gesture_begin_time=None)
    with pytest.raises(MissingTimestamp):
        compatibility_factors(c, expr(), TemporalMode.ABSOLUTE)


def test_combined_mode_averages_both_scores():
    c = cand(order=1, begin=1000.0)
    e = expr(order=3, begin=1500.0)
    ordering = math.exp(-2)
    absolute = math.exp(-0.5)
    got = compatibility_factors(c, e, TemporalMode.COMBINED).temporal
    assert got == pytest.approx(0.5 * (ordering + absolute), abs=1e-12)


def test_semantic_type_mismatch_vetoes():
    c = cand(semantic_type="town", object_id="t1")
    e = expr(Category.DEMONSTRATIVE, target_semantic_type="house")
    assert compatibility(c, e) == 0.0


def test_attribute_mismatch_vetoes():
    c = cand(attributes={"style": "colonial"})
    e = expr(Category.DEFINITE, target_semantic_type="house",
             attribute_constraints={"style": "victorian"})
    assert compatibility(c, e) == 0.0


def test_unknown_sides_do_not_veto():
    c = cand(attributes={})  # object lacks the style attribute entirely
    e = expr(Category.DEFINITE, target_semantic_type="house",
             attribute_constraints={"style": "victorian"})
    factors = compatibility_factors(c, e)
    assert factors.attributes == 1.0
    assert compatibility(cand(), expr()) == 1.0


@pytest.mark.parametrize("object_id,target,matches", [
    ("h8", None, True),
    ("h8", "eight", True),
    ("h8", "8", True),
    ("eight", "eight", True),
    ("h8", "nine", False),
    ("t8", "eight", True),  # semantic-type factor, not the identifier, separates these
    ("h18", "eight", False),
])
def test_identifier_matching_rules(object_id, target, matches):
    assert identifier_match(object_id, target) == (1.0 if matches else 0.0)


def test_match_score_composes_three_factors(table):
    focus_h8 = cand(Status.FOCUS, object_id="h8")
    v = vectors_with(focus_h8)
    got = match_score(focus_h8, expr(Category.PRONOUN), v, table, ResolverConfig())
    assert got == pytest.approx(1.0 * 0.85 * 1.0, abs=1e-12)


def test_display_candidates_score_zero_under_shipped_table(table):
    display = cand(Status.DISPLAY)
    v = vectors_with(display, extra_d=7)
    for category in Category:
        assert match_score(display, expr(category), v, table, ResolverConfig()) == 0.0


def test_gesture_score_with_temporal_decay(table):
    gesture = cand(prob=0.5, order=1)
    v = StatusVectors(g=[gesture], r=[expr(Category.DEMONSTRATIVE, order=2,
                                           target_semantic_type="house")])
    got = match_score(gesture, v.r[0], v, table, ResolverConfig())
    assert got == pytest.approx(0.5 * 0.67 * math.exp(-1), abs=1e-12)
    assert got == pytest.approx(0.1232, abs=5e-5)


def test_ablation_reduces_to_compatibility(table):
    gesture = cand(prob=0.5, order=1)
    v = StatusVectors(g=[gesture], r=[expr(Category.DEMONSTRATIVE, order=2,
                                           target_semantic_type="house")])
    got = match_score(gesture, v.r[0], v, table, ResolverConfig(ablate_cognitive=True))
    assert got == pytest.approx(math.exp(-1), abs=1e-12)


def test_shipped_json_matches_loaded_table(table):
    raw = json.loads(resources.files("mmref.data")
                     .joinpath("status_likelihoods.json").read_text())
    for name, row in raw.items():
        category = Category(name)
        assert table.lookup(category, Status.GESTURE) == row["gesture"]
        assert table.lookup(category, Status.FOCUS) == row["focus"]
        assert table.lookup(category, Status.DISPLAY) == row["visible"]
