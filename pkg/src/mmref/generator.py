"""Synthetic corpus generation with controllable input statistics.

Turns are drawn from a category mix (simple one-zero / one-one / complex)
and templated onto the builtin grid scene; the generator knows each turn's
intent, so gold referents come for free.  Speech/gesture timing follows two
sampled relations: who starts first (gesture-first rate) and whether the
referring-expression block overlaps the gesture block (overlap rate).
Everything is driven by one seed, so a fixed seed reproduces the corpus
byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Optional

from .context import Event, segment_turns
from .defaults import default_lexicon
from .harness import Scenario
from .parsing import Lexicon, expression_token_spans
from .replay import CATEGORY_COMPLEX, CATEGORY_ONE_ONE, CATEGORY_ONE_ZERO

DEFAULT_MIX = {CATEGORY_ONE_ZERO: 0.064, CATEGORY_ONE_ONE: 0.689,
               CATEGORY_COMPLEX: 0.247}
DEFAULT_GESTURE_FIRST_RATE = 0.85
DEFAULT_OVERLAP_RATE = 0.48
DEFAULT_AMBIGUITY_RATE = 0.15

WORD_MS = 150.0
WORD_GAP_MS = 50.0
GESTURE_MS = 150.0
GESTURE_SPACING_MS = 400.0
PLACEMENT_GAP_MS = 400.0
TURN_GAP_MS = 3000.0

# Grid scene layout knowledge: isolated objects capture exactly themselves;
# stacked houses sit on a town and capture both.
ISOLATED_HOUSES = [f"h{i}" for i in range(5, 17)]
STACKED_HOUSES = ["h1", "h2", "h3", "h4"]
STACKED_PAIRS = {"h1": "t1", "h2": "t2", "h3": "t3", "h4": "t4"}
ISOLATED_TOWNS = ["t5", "t6", "t7", "t8"]
ADJACENT_HOUSE_PAIRS = [("h5", "h6"), ("h7", "h8"), ("h9", "h10"),
                        ("h11", "h12"), ("h13", "h14"), ("h15", "h16")]
GRID_POSITIONS = {
    **{f"h{1 + c + 4 * r}": (100.0 + 160.0 * c, 100.0 + 160.0 * r)
       for r in range(4) for c in range(4)},
    **{f"t{1 + c}": (100.0 + 160.0 * c, 120.0) for c in range(4)},
    **{f"t{5 + c}": (100.0 + 160.0 * c, 740.0) for c in range(4)},
}


class InvalidRates(ValueError):
    pass


@dataclass
class GeneratorParams:
    turns: int = 100
    seed: int = 0
    mix: Optional[dict[str, float]] = None
    ambiguity_rate: float = DEFAULT_AMBIGUITY_RATE
    gesture_first_rate: float = DEFAULT_GESTURE_FIRST_RATE
    overlap_rate: float = DEFAULT_OVERLAP_RATE

    def validated_mix(self) -> dict[str, float]:
        mix = dict(self.mix) if self.mix else dict(DEFAULT_MIX)
        unknown = set(mix) - {CATEGORY_ONE_ZERO, CATEGORY_ONE_ONE, CATEGORY_COMPLEX}
        if unknown:
            raise InvalidRates(f"unknown mix categories: {sorted(unknown)}")
        if any(v < 0 for v in mix.values()) or abs(sum(mix.values()) - 1.0) > 1e-6:
            raise InvalidRates("mix proportions must be non-negative and sum to 1")
        for name in ("ambiguity_rate", "gesture_first_rate", "overlap_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidRates(f"{name} must lie in [0, 1], got {value}")
        return mix


@dataclass
class _PlannedTurn:
    words: list[str]  # utterance, may be empty
    expr_word_ranges: list[tuple[int, int]]  # half-open ranges of expressions
    gesture_targets: list[tuple[float, float]]  # focus points, in order
    gesture_kinds: list[str]
    gesture_radii: list[float]
    gold: dict[int, list[str]]


def _word_times(words: list[str], s0: float) -> list[tuple[float, float]]:
    times = []
    t = s0
    for _ in words:
        times.append((t, t + WORD_MS))
        t += WORD_MS + WORD_GAP_MS
    return times


def _layout_turn(plan: _PlannedTurn, rng: random.Random, gesture_first_rate: float,
                 overlap_rate: float, turn_start: float) -> tuple[list[Event], float]:
    """Realize a planned turn as timestamped events honoring the sampled relation."""
    gesture_count = len(plan.gesture_targets)
    word_count = len(plan.words)
    g_begins = [i * GESTURE_SPACING_MS for i in range(gesture_count)]
    g_block = (0.0, (g_begins[-1] + GESTURE_MS) if gesture_count else 0.0)

    s0 = 0.0
    g_offset = 0.0
    if word_count and gesture_count and plan.expr_word_ranges:
        first = plan.expr_word_ranges[0][0]
        last = max(end for _, end in plan.expr_word_ranges) - 1
        expr_begin_rel = first * (WORD_MS + WORD_GAP_MS)
        expr_end_rel = last * (WORD_MS + WORD_GAP_MS) + WORD_MS
        gesture_first = rng.random() < gesture_first_rate
        overlap = rng.random() < overlap_rate
        if gesture_first:
            if overlap:
                expr_begin = g_block[0] + 0.5 * (g_block[1] - g_block[0])
            else:
                expr_begin = g_block[1] + PLACEMENT_GAP_MS
            s0 = expr_begin - expr_begin_rel
        else:
            if overlap:
                g_offset = expr_begin_rel + 0.5 * (expr_end_rel - expr_begin_rel)
            else:
                g_offset = expr_end_rel + PLACEMENT_GAP_MS
    elif word_count and gesture_count:
        s0 = g_block[1] + PLACEMENT_GAP_MS

    events: list[Event] = []
    for i, begin in enumerate(g_begins):
        b, e = begin + g_offset, begin + g_offset + GESTURE_MS
        at = plan.gesture_targets[i]
        events.append(Event("gesture", b, e, {
            "kind": plan.gesture_kinds[i], "at": [at[0], at[1]],
            "radius": plan.gesture_radii[i], "begin": b, "end": e}))
    for word, (b, e) in zip(plan.words, _word_times(plan.words, s0)):
        events.append(Event("token", b, e, {"text": word, "begin": b, "end": e}))

    events.sort(key=lambda ev: ev.begin_time)
    shift = turn_start - events[0].begin_time
    shifted = [Event(ev.kind, ev.begin_time + shift, ev.end_time + shift,
                     {**ev.payload,
                      **({"begin": ev.payload["begin"] + shift,
                          "end": ev.payload["end"] + shift}
                         if "begin" in ev.payload else {})})
               for ev in events]
    return shifted, max(ev.end_time for ev in shifted)


def _point(target_id: str) -> tuple[float, float]:
    return GRID_POSITIONS[target_id]


def _plan_one_one(rng: random.Random, ambiguous: bool) -> _PlannedTurn:
    if ambiguous and rng.random() < 0.5:
        house_a, house_b = rng.choice(ADJACENT_HOUSE_PAIRS)
        ax, ay = GRID_POSITIONS[house_a]
        bx, by = GRID_POSITIONS[house_b]
        center = ((ax + bx) / 2.0, (ay + by) / 2.0)
        return _PlannedTurn(
            words="compare these two houses".split(),
            expr_word_ranges=[(1, 4)],
            gesture_targets=[center], gesture_kinds=["circle"], gesture_radii=[90.0],
            gold={1: sorted([house_a, house_b])})
    if ambiguous:
        target = rng.choice(STACKED_HOUSES)
        words, expr_range = rng.choice((
            ("how much is this house", (3, 5)),
            ("show me that house", (2, 4)),
        ))
        return _PlannedTurn(words.split(), [expr_range], [_point(target)],
                            ["point"], [0.0], {1: [target]})
    kind = rng.random()
    if kind < 0.55:
        target = rng.choice(ISOLATED_HOUSES)
        words, expr_range = rng.choice((
            ("how much is this house", (3, 5)),
            ("show me that house", (2, 4)),
            ("how large is this one", (3, 5)),
        ))
    elif kind < 0.8:
        target = rng.choice(ISOLATED_TOWNS)
        words, expr_range = rng.choice((
            ("what about this town", (2, 4)),
            ("what is over there", (3, 4)),
        ))
    else:
        target = rng.choice(ISOLATED_HOUSES)
        words, expr_range = ("how much is that one", (3, 5))
    return _PlannedTurn(words.split(), [expr_range], [_point(target)],
                        ["point"], [0.0], {1: [target]})


def _plan_complex(rng: random.Random, ambiguous: bool) -> _PlannedTurn:
    kind = rng.random()
    if kind < 0.4:
        a, b = rng.sample(ISOLATED_HOUSES, 2)
        if ambiguous:
            a = rng.choice(STACKED_HOUSES)
        return _PlannedTurn(
            words="compare this house with that house".split(),
            expr_word_ranges=[(1, 3), (4, 6)],
            gesture_targets=[_point(a), _point(b)],
            gesture_kinds=["point", "point"], gesture_radii=[0.0, 0.0],
            gold={1: [a], 2: [b]})
    if kind < 0.65:
        a, b, c = rng.sample(ISOLATED_HOUSES, 3)
        return _PlannedTurn(
            words="compare this house with that house and this one".split(),
            expr_word_ranges=[(1, 3), (4, 6), (7, 9)],
            gesture_targets=[_point(a), _point(b), _point(c)],
            gesture_kinds=["point"] * 3, gesture_radii=[0.0] * 3,
            gold={1: [a], 2: [b], 3: [c]})
    if kind < 0.85:
        house = rng.choice(STACKED_HOUSES if ambiguous else ISOLATED_HOUSES)
        town = rng.choice(ISOLATED_TOWNS)
        return _PlannedTurn(
            words="compare this house with that town".split(),
            expr_word_ranges=[(1, 3), (4, 6)],
            gesture_targets=[_point(house), _point(town)],
            gesture_kinds=["point", "point"], gesture_radii=[0.0, 0.0],
            gold={1: [house], 2: [town]})
    a, b = rng.sample(ISOLATED_HOUSES, 2)
    return _PlannedTurn(
        words="compare these two houses".split(),
        expr_word_ranges=[(1, 4)],
        gesture_targets=[_point(a), _point(b)],
        gesture_kinds=["point", "point"], gesture_radii=[0.0, 0.0],
        gold={1: sorted([a, b])})


def _plan_setup(rng: random.Random) -> _PlannedTurn:
    target = rng.choice(ISOLATED_HOUSES)
    return _PlannedTurn("how much is this house".split(), [(3, 5)],
                        [_point(target)], ["point"], [0.0], {1: [target]})


def _plan_one_zero(rng: random.Random) -> list[_PlannedTurn]:
    variant = rng.random()
    if variant < 0.4:
        setup = _plan_setup(rng)
        follow = _PlannedTurn("how much is it".split(), [(3, 4)], [], [], [],
                              {1: list(setup.gold[1])})
        return [setup, follow]
    if variant < 0.7:
        target = rng.choice(ISOLATED_HOUSES + ISOLATED_TOWNS)
        return [_PlannedTurn([], [], [_point(target)], ["point"], [0.0],
                             {1: [target]})]
    setup = _plan_setup(rng)
    follow = _PlannedTurn("how large".split(), [], [], [], [],
                          {1: list(setup.gold[1])})
    return [setup, follow]


def generate_synthetic_corpus(params: GeneratorParams) -> list[Scenario]:
    """Deterministic scenario list; total turns equal params.turns."""
    mix = params.validated_mix()
    rng = random.Random(params.seed)
    categories = list(mix)
    weights = [mix[c] for c in categories]
    scenarios: list[Scenario] = []
    turns_emitted = 0
    serial = 0
    while turns_emitted < params.turns:
        category = rng.choices(categories, weights=weights, k=1)[0]
        if category == CATEGORY_ONE_ZERO:
            plans = _plan_one_zero(rng)
        elif category == CATEGORY_ONE_ONE:
            plans = [_plan_one_one(rng, rng.random() < params.ambiguity_rate)]
        else:
            plans = [_plan_complex(rng, rng.random() < params.ambiguity_rate)]
        if turns_emitted + len(plans) > params.turns and len(plans) > 1:
            continue  # keep the total exact; retry with another draw
        serial += 1
        events: list[Event] = []
        gold: list[dict[int, list[str]]] = []
        clock = 0.0
        for plan in plans:
            turn_events, clock_end = _layout_turn(
                plan, rng, params.gesture_first_rate, params.overlap_rate, clock)
            events.extend(turn_events)
            gold.append(plan.gold)
            clock = clock_end + TURN_GAP_MS
        scenarios.append(Scenario(
            scenario_id=f"syn-{serial:04d}",
            scene_name="grid",
            events=events,
            gold=[{k: set(v) for k, v in g.items()} for g in gold],
            category=category,
        ))
        turns_emitted += len(plans)
    return scenarios


def corpus_temporal_stats(scenarios: list[Scenario],
                          lexicon: Optional[Lexicon] = None) -> dict[str, Any]:
    """Observed speech/gesture order and overlap over both-modality turns."""
    lexicon = lexicon or default_lexicon()
    both = gesture_first = overlapping = 0
    for scenario in scenarios:
        for turn in segment_turns(scenario.events):
            if not turn.gestures or not turn.tokens:
                continue
            spans = expression_token_spans(turn.tokens, lexicon)
            if not spans:
                continue
            expr_begin = min(turn.tokens[s].begin_time for s, _ in spans)
            expr_end = max(turn.tokens[e - 1].end_time for _, e in spans)
            g_begin = min(g.begin_time for g in turn.gestures)
            g_end = max(g.end_time for g in turn.gestures)
            both += 1
            if g_begin < expr_begin:
                gesture_first += 1
            if g_begin <= expr_end and expr_begin <= g_end:
                overlapping += 1
    return {
        "turns_with_both": both,
        "gesture_first": gesture_first / both if both else 0.0,
        "speech_first": 1.0 - gesture_first / both if both else 0.0,
        "overlap": overlapping / both if both else 0.0,
    }
