from __future__ import annotations

import json

import pytest

from mmref.generator import (DEFAULT_GESTURE_FIRST_RATE, GeneratorParams, InvalidRates,
                             corpus_temporal_stats, generate_synthetic_corpus)
from mmref.harness import evaluate
from mmref.replay import CATEGORY_COMPLEX, CATEGORY_ONE_ONE, CATEGORY_ONE_ZERO


def records(corpus):
    return [json.dumps(s.as_record(), sort_keys=True) for s in corpus]


def test_fixed_seed_reproduces_corpus_byte_for_byte():
    a = generate_synthetic_corpus(GeneratorParams(turns=60, seed=3))
    b = generate_synthetic_corpus(GeneratorParams(turns=60, seed=3))
    assert records(a) == records(b)


def test_different_seeds_differ():
    a = generate_synthetic_corpus(GeneratorParams(turns=60, seed=3))
    b = generate_synthetic_corpus(GeneratorParams(turns=60, seed=4))
    assert records(a) != records(b)


def test_turn_budget_is_exact():
    corpus = generate_synthetic_corpus(GeneratorParams(turns=83, seed=5))
    assert sum(len(s.gold) for s in corpus) == 83


def test_pure_one_one_mix_realizes_one_one_turns():
    corpus = generate_synthetic_corpus(GeneratorParams(
        turns=40, seed=7, mix={CATEGORY_ONE_ONE: 1.0}))
    report = evaluate("greedy", corpus)
    assert report.totals[CATEGORY_ONE_ONE] == 40
    assert report.totals[CATEGORY_ONE_ZERO] == 0
    assert report.totals[CATEGORY_COMPLEX] == 0


def test_complex_mix_realizes_complex_turns():
    corpus = generate_synthetic_corpus(GeneratorParams(
        turns=30, seed=9, mix={CATEGORY_COMPLEX: 1.0}))
    report = evaluate("greedy", corpus)
    assert report.totals[CATEGORY_COMPLEX] == 30


def test_gold_is_reachable_for_unambiguous_generation():
    corpus = generate_synthetic_corpus(GeneratorParams(turns=100, seed=21,
                                                       ambiguity_rate=0.0))
    report = evaluate("greedy", corpus)
    assert report.overall_correct == report.overall_total
    assert report.excluded == []


def test_default_rates_reproduce_gesture_first_fraction():
    corpus = generate_synthetic_corpus(GeneratorParams(turns=1000, seed=7))
    stats = corpus_temporal_stats(corpus)
    assert stats["turns_with_both"] > 500
    assert stats["gesture_first"] == pytest.approx(DEFAULT_GESTURE_FIRST_RATE, abs=0.03)
    assert stats["speech_first"] == pytest.approx(1 - DEFAULT_GESTURE_FIRST_RATE,
                                                  abs=0.03)


def test_overlap_rate_tracks_parameter():
    high = generate_synthetic_corpus(GeneratorParams(turns=400, seed=11,
                                                     overlap_rate=0.9))
    low = generate_synthetic_corpus(GeneratorParams(turns=400, seed=11,
                                                    overlap_rate=0.1))
    assert corpus_temporal_stats(high)["overlap"] > 0.8
    assert corpus_temporal_stats(low)["overlap"] < 0.2


def test_zero_gesture_first_rate_puts_speech_first():
    corpus = generate_synthetic_corpus(GeneratorParams(turns=200, seed=13,
                                                       gesture_first_rate=0.0))
    assert corpus_temporal_stats(corpus)["gesture_first"] == 0.0


@pytest.mark.parametrize("params", [
    GeneratorParams(mix={CATEGORY_ONE_ONE: 0.5}),
    GeneratorParams(mix={"nonsense": 1.0}),
    GeneratorParams(ambiguity_rate=1.5),
    GeneratorParams(gesture_first_rate=-0.1),
    GeneratorParams(overlap_rate=2.0),
])
def test_invalid_rates_rejected(params):
    with pytest.raises(InvalidRates):
        generate_synthetic_corpus(params)


def test_turn_gaps_exceed_idle_timeout_between_turns():
    from mmref.context import segment_turns

    corpus = generate_synthetic_corpus(GeneratorParams(turns=60, seed=17))
    for scenario in corpus:
        turns = segment_turns(scenario.events)
        assert len(turns) == len(scenario.gold)
