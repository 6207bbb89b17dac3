"""Corpus loading, replay evaluation, and runtime benchmarking.

A corpus is a JSONL file of scenarios; each scenario replays as one session
so focus carries across its turns.  A turn is correct only when every
expression's assigned referent set equals the gold set exactly.  Accuracy is
reported per input category (simple one-zero / simple one-one / complex)
alongside overall totals.
"""

from __future__ import annotations

import json
import math
import random
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Union

from .context import Event, event_from_record
from .defaults import builtin_corpus_records, builtin_scene
from .domain import (CandidateObject, Category, ReferringExpression, Scene,
                     SceneObject, Status, StatusVectors, PLURAL_UNNUMBERED, SINGULAR)
from .replay import (CATEGORY_COMPLEX, CATEGORY_ONE_ONE, CATEGORY_ONE_ZERO,
                     SessionRuntime, TurnOutcome)
from .scoring import LikelihoodTable, ResolverConfig

CATEGORIES = (CATEGORY_ONE_ZERO, CATEGORY_ONE_ONE, CATEGORY_COMPLEX)


@dataclass
class Scenario:
    """One replayable session with per-turn gold referent sets."""

    scenario_id: str
    scene_name: str
    events: list[Event]
    gold: list[dict[int, set[str]]]  # one map per expected turn
    category: str = ""  # intended category, informational

    @staticmethod
    def from_record(record: dict[str, Any]) -> "Scenario":
        gold = []
        for turn_gold in record.get("gold", []):
            gold.append({int(k): set(v) for k, v in turn_gold.items()})
        return Scenario(
            scenario_id=str(record.get("id", "")),
            scene_name=str(record.get("scene", "golden")),
            events=[event_from_record(r) for r in record.get("events", [])],
            gold=gold,
            category=str(record.get("category", "")),
        )

    def as_record(self) -> dict[str, Any]:
        return {
            "id": self.scenario_id,
            "category": self.category,
            "scene": self.scene_name,
            "events": [
                {"kind": e.kind, "payload": dict(e.payload)} for e in self.events
            ],
            "gold": [
                {str(k): sorted(v) for k, v in sorted(turn.items())}
                for turn in self.gold
            ],
        }


def load_corpus(source: Union[str, Path]) -> list[Scenario]:
    """Load scenarios from a JSONL path or a builtin corpus name."""
    path = Path(source)
    if path.exists():
        records = [json.loads(line) for line in
                   path.read_text(encoding="utf-8").splitlines() if line.strip()]
    else:
        records = builtin_corpus_records(str(source))
    return [Scenario.from_record(r) for r in records]


def save_corpus(scenarios: Iterable[Scenario], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for scenario in scenarios:
            fh.write(json.dumps(scenario.as_record(), sort_keys=True) + "\n")


def resolve_scene(name: str, base_dir: Optional[Path] = None) -> Scene:
    candidate = Path(name)
    if base_dir is not None and (base_dir / candidate).exists():
        from .domain import load_scene

        return load_scene(base_dir / candidate)
    if candidate.exists():
        from .domain import load_scene

        return load_scene(candidate)
    return builtin_scene(name)


@dataclass
class CategoryReport:
    """Accuracy per input category plus overall totals."""

    resolver: str
    config: dict[str, Any] = field(default_factory=dict)
    totals: dict[str, int] = field(default_factory=lambda: {c: 0 for c in CATEGORIES})
    correct: dict[str, int] = field(default_factory=lambda: {c: 0 for c in CATEGORIES})
    excluded: list[str] = field(default_factory=list)  # gold-mismatch scenarios

    def record(self, category: str, is_correct: bool) -> None:
        self.totals[category] += 1
        if is_correct:
            self.correct[category] += 1

    @property
    def overall_total(self) -> int:
        return sum(self.totals.values())

    @property
    def overall_correct(self) -> int:
        return sum(self.correct.values())

    def accuracy(self, category: Optional[str] = None) -> float:
        total = self.totals[category] if category else self.overall_total
        correct = self.correct[category] if category else self.overall_correct
        return correct / total if total else 0.0

    def as_dict(self) -> dict[str, Any]:
        return {
            "resolver": self.resolver,
            "config": self.config,
            "categories": {
                c: {"total": self.totals[c], "correct": self.correct[c],
                    "accuracy": self.accuracy(c)}
                for c in CATEGORIES
            },
            "overall": {"total": self.overall_total, "correct": self.overall_correct,
                        "accuracy": self.accuracy()},
            "excluded": sorted(self.excluded),
        }

    def render_table(self) -> str:
        rows = [("total", self.overall_correct, self.overall_total, self.accuracy())]
        rows += [(c, self.correct[c], self.totals[c], self.accuracy(c))
                 for c in CATEGORIES]
        width = max(len(r[0]) for r in rows)
        lines = [f"{'input class':<{width}}  correct  total  accuracy"]
        for name, correct, total, acc in rows:
            lines.append(f"{name:<{width}}  {correct:>7}  {total:>5}  {acc:>7.1%}")
        if self.excluded:
            lines.append(f"excluded (gold mismatch): {len(self.excluded)}")
        return "\n".join(lines)


def turn_is_correct(outcome: TurnOutcome, gold: dict[int, set[str]]) -> bool:
    """Exact set match for every expression; empty gold set means unresolved."""
    for index, wanted in gold.items():
        if outcome.result.assigned_ids(index) != wanted:
            return False
    for index in outcome.result.assignments:
        if index not in gold:
            return False
    return True


def _gold_indices_consistent(outcome: TurnOutcome, gold: dict[int, set[str]]) -> bool:
    parsed = {e.order_index for e in outcome.vectors.r}
    return set(gold) <= parsed


def evaluate(resolver: str, scenarios: list[Scenario],
             table: Optional[LikelihoodTable] = None,
             config: ResolverConfig = ResolverConfig(),
             base_dir: Optional[Path] = None) -> CategoryReport:
    """Replay every scenario as a session and score each turn against gold."""
    report = CategoryReport(resolver=resolver, config=_config_dict(config))
    scenes: dict[str, Scene] = {}
    for scenario in scenarios:
        scene = scenes.get(scenario.scene_name)
        if scene is None:
            scene = resolve_scene(scenario.scene_name, base_dir)
            scenes[scenario.scene_name] = scene
        runtime = SessionRuntime(scene, resolver, table=table, config=config)
        for event in scenario.events:
            runtime.post_event(event)
        runtime.finalize_pending()
        outcomes = runtime.outcomes
        if len(outcomes) != len(scenario.gold) or any(
                not _gold_indices_consistent(o, g)
                for o, g in zip(outcomes, scenario.gold)):
            report.excluded.append(scenario.scenario_id)
            continue
        for outcome, gold in zip(outcomes, scenario.gold):
            report.record(outcome.category, turn_is_correct(outcome, gold))
    return report


def _config_dict(config: ResolverConfig) -> dict[str, Any]:
    return {
        "temporal_mode": config.temporal_mode.value,
        "tau_ms": config.tau_ms,
        "ablate_cognitive": config.ablate_cognitive,
        "renormalize_table": config.renormalize_table,
        "threshold": config.threshold,
        "max_iter": config.max_iter,
        "tol": config.tol,
    }


@dataclass
class BenchmarkReport:
    resolver: str
    repetitions: int
    per_category: dict[str, dict[str, float]] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {"resolver": self.resolver, "repetitions": self.repetitions,
                "per_category": self.per_category}


def benchmark_runtime(resolver: str, scenarios: list[Scenario], repetitions: int,
                      table: Optional[LikelihoodTable] = None,
                      config: ResolverConfig = ResolverConfig(),
                      base_dir: Optional[Path] = None) -> BenchmarkReport:
    """Mean/median resolver wall time per input, by category.

    Only the resolver call is timed; parsing and vector assembly are shared
    across resolvers and excluded.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    from .replay import RESOLVERS

    fn = RESOLVERS[resolver]
    samples: dict[str, list[float]] = {c: [] for c in CATEGORIES}
    scenes: dict[str, Scene] = {}
    for scenario in scenarios:
        scene = scenes.setdefault(scenario.scene_name,
                                  resolve_scene(scenario.scene_name, base_dir))
        runtime = SessionRuntime(scene, resolver, table=table, config=config)
        for event in scenario.events:
            runtime.post_event(event)
        runtime.finalize_pending()
        for outcome in runtime.outcomes:
            started = time.perf_counter()
            for _ in range(repetitions):
                fn(outcome.vectors, runtime.table, config, scene, None)
            elapsed = (time.perf_counter() - started) / repetitions
            samples[outcome.category].append(elapsed * 1000.0)
    report = BenchmarkReport(resolver=resolver, repetitions=repetitions)
    for category, values in samples.items():
        if values:
            report.per_category[category] = {
                "inputs": len(values),
                "mean_ms": statistics.fmean(values),
                "median_ms": statistics.median(values),
            }
    return report


def render_benchmark_comparison(reports: list[BenchmarkReport]) -> str:
    lines = ["input class        " + "".join(f"{r.resolver:>14}" for r in reports)]
    for category in CATEGORIES:
        cells = []
        for report in reports:
            stats = report.per_category.get(category)
            cells.append(f"{stats['mean_ms']:>11.3f} ms" if stats else f"{'-':>14}")
        lines.append(f"{category:<19}" + "".join(cells))
    return "\n".join(lines)


# --------------------------------------------------------------------------- #
# Randomized instances for property suites and scaling measurements.

_TYPES = ("house", "town")
_COLORS = ("green", "red", "blue", "white")
_STYLES = ("victorian", "colonial", "ranch", "modern")


def _random_object(rng: random.Random, index: int) -> SceneObject:
    semantic_type = rng.choice(_TYPES)
    attributes: dict[str, Any] = {}
    if semantic_type == "house":
        attributes = {"color": rng.choice(_COLORS), "style": rng.choice(_STYLES)}
    else:
        attributes = {"population": rng.randrange(1000, 90000)}
    return SceneObject(id=f"o{index}", semantic_type=semantic_type,
                       attributes=attributes,
                       position=(rng.uniform(0, 500), rng.uniform(0, 500)))


def _random_expression(rng: random.Random, order_index: int,
                       begin_time: float) -> ReferringExpression:
    category = rng.choice((Category.PRONOUN, Category.DEMONSTRATIVE,
                           Category.DEFINITE, Category.LOCATIVE, Category.EMPTY))
    target_type = rng.choice((None, "house", "town"))
    number = rng.choice((None, SINGULAR, PLURAL_UNNUMBERED, rng.randint(1, 3)))
    constraints: dict[str, Any] = {}
    if target_type == "house" and rng.random() < 0.4:
        constraints["color"] = rng.choice(_COLORS)
    if category in (Category.PRONOUN, Category.LOCATIVE, Category.EMPTY):
        target_type, constraints = None, {}
    return ReferringExpression(
        surface=f"expr-{order_index}", category=category, order_index=order_index,
        begin_time=begin_time, target_semantic_type=target_type,
        target_number=number, attribute_constraints=constraints)


def random_status_vectors(rng: random.Random,
                          gestures: tuple[int, int] = (2, 4),
                          per_gesture: tuple[int, int] = (1, 3),
                          focus: tuple[int, int] = (0, 3),
                          display: tuple[int, int] = (0, 8),
                          expressions: tuple[int, int] = (2, 4)) -> StatusVectors:
    """Structurally valid vectors with randomized features (no scene needed)."""
    next_object = [0]

    def take_object() -> SceneObject:
        next_object[0] += 1
        return _random_object(rng, next_object[0])

    g: list[CandidateObject] = []
    gesture_count = rng.randint(*gestures)
    for order in range(1, gesture_count + 1):
        members = rng.randint(*per_gesture)
        weights = [rng.uniform(0.05, 1.0) for _ in range(members)]
        total = sum(weights)
        begin = 1000.0 * order
        for weight in weights:
            g.append(CandidateObject(take_object(), Status.GESTURE, weight / total,
                                     gesture_order_index=order,
                                     gesture_begin_time=begin))
    f_count = rng.randint(*focus)
    f = [CandidateObject(take_object(), Status.FOCUS, 1.0 / f_count)
         for _ in range(f_count)] if f_count else []
    d_count = rng.randint(*display)
    d = [CandidateObject(take_object(), Status.DISPLAY, 1.0 / d_count)
         for _ in range(d_count)] if d_count else []
    expr_count = rng.randint(*expressions)
    r = [_random_expression(rng, i, 1000.0 * gesture_count + 500.0 * i)
         for i in range(1, expr_count + 1)]
    vectors = StatusVectors(g=g, f=f, d=d, r=r)
    vectors.validate()
    return vectors


def scaling_series(pair_counts: Iterable[int], seed: int = 13,
                   table: Optional[LikelihoodTable] = None,
                   config: ResolverConfig = ResolverConfig(),
                   inner_repeats: int = 20) -> list[dict[str, float]]:
    """Greedy resolver wall time and scored-pair counts across input sizes."""
    from .defaults import default_likelihood_table
    from .greedy import resolve as resolve_greedy

    table = table or default_likelihood_table()
    rng = random.Random(seed)
    points = []
    for pairs in pair_counts:
        expressions = 2
        candidates = max(1, pairs // expressions)
        gestures = max(1, candidates // 3)
        per_gesture = max(1, candidates // gestures)
        rest = max(0, candidates - gestures * per_gesture)
        vectors = random_status_vectors(
            rng, gestures=(gestures, gestures),
            per_gesture=(per_gesture, per_gesture),
            focus=(0, 0), display=(rest, rest),
            expressions=(expressions, expressions))
        result = resolve_greedy(vectors, table, config)
        started = time.perf_counter()
        for _ in range(inner_repeats):
            resolve_greedy(vectors, table, config)
        elapsed = (time.perf_counter() - started) / inner_repeats
        total = len(vectors.g) + len(vectors.f) + len(vectors.d)
        points.append({
            "pairs": total * len(vectors.r),
            "seconds": elapsed,
            "score_evaluations": result.score_evaluations,
        })
    return points


def loglog_slope(points: list[dict[str, float]]) -> float:
    """Least-squares slope of log(seconds) against log(pairs)."""
    xs = [math.log(p["pairs"]) for p in points]
    ys = [math.log(max(p["seconds"], 1e-9)) for p in points]
    n = len(xs)
    mean_x, mean_y = sum(xs) / n, sum(ys) / n
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    var = sum((x - mean_x) ** 2 for x in xs)
    return cov / var if var else 0.0
