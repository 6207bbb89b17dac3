"""Session runtime: feed events in, get resolved turns out.

One code path serves batch replay (corpus evaluation, CLI) and the live
HTTP service, so a recorded event stream resolves identically however it is
transported.  Turns are finalized on idle gaps or explicit end-turn events;
each finalized turn is resolved with the configured resolver and its
referents become the next turn's focus.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from .context import (DEFAULT_IDLE_TIMEOUT_MS, END_TURN, Event, SessionState, Turn,
                      turn_from_events, build_status_vectors, update_focus)
from .decisionlist import resolve_decision_list
from .defaults import default_lexicon, default_likelihood_table
from .domain import ResolutionResult, Scene, StatusVectors
from .graphmatch import resolve_graph
from .greedy import ResolveTrace, resolve as resolve_greedy
from .parsing import Lexicon, extract_referring_expressions
from .scoring import LikelihoodTable, ResolverConfig

CATEGORY_ONE_ZERO = "simple-one-zero"
CATEGORY_ONE_ONE = "simple-one-one"
CATEGORY_COMPLEX = "complex"


def categorize_counts(expression_count: int, gesture_count: int) -> str:
    """Three-way input category from raw per-turn counts."""
    if (expression_count <= 1 and gesture_count == 0) or \
            (expression_count == 0 and gesture_count == 1):
        return CATEGORY_ONE_ZERO
    if expression_count == 1 and gesture_count == 1:
        return CATEGORY_ONE_ONE
    return CATEGORY_COMPLEX


def categorize_turn(turn: Turn, lexicon: Lexicon) -> str:
    expressions = extract_referring_expressions(turn.tokens, lexicon)
    return categorize_counts(len(expressions), len(turn.gestures))


@dataclass
class TurnOutcome:
    turn_number: int
    turn: Turn
    vectors: StatusVectors
    result: ResolutionResult
    category: str
    focus_before: set[str]
    focus_after: set[str]
    resolve_seconds: float
    trace: Optional[ResolveTrace] = None


ResolverFn = Callable[[StatusVectors, LikelihoodTable, ResolverConfig, Optional[Scene],
                       Optional[ResolveTrace]], ResolutionResult]


def _greedy_adapter(vectors, table, config, scene, trace):
    return resolve_greedy(vectors, table, config, scene, trace)


def _graph_adapter(vectors, table, config, scene, trace):
    return resolve_graph(vectors, table, config, scene)


def _dlist_adapter(vectors, table, config, scene, trace):
    return resolve_decision_list(vectors, scene, config)


RESOLVERS: dict[str, ResolverFn] = {
    "greedy": _greedy_adapter,
    "graph": _graph_adapter,
    "dlist": _dlist_adapter,
}


class SessionRuntime:
    """Incremental per-session pipeline; single writer per session."""

    def __init__(self, scene: Scene, resolver: str = "greedy",
                 lexicon: Optional[Lexicon] = None,
                 table: Optional[LikelihoodTable] = None,
                 config: ResolverConfig = ResolverConfig(),
                 idle_timeout: float = DEFAULT_IDLE_TIMEOUT_MS,
                 with_trace: bool = False):
        if resolver not in RESOLVERS:
            raise ValueError(f"unknown resolver {resolver!r}; have {sorted(RESOLVERS)}")
        self.scene = scene
        self.resolver_name = resolver
        self.resolver = RESOLVERS[resolver]
        self.lexicon = lexicon or default_lexicon()
        self.table = table or default_likelihood_table()
        self.config = config
        self.with_trace = with_trace
        self.state = SessionState(scene=scene, idle_timeout=idle_timeout)
        self.outcomes: list[TurnOutcome] = []
        self._pending: list[Event] = []
        self._pending_last_end: Optional[float] = None

    @property
    def last_event_time(self) -> Optional[float]:
        return self._pending_last_end

    def has_pending(self) -> bool:
        return bool(self._pending)

    def post_event(self, event: Event) -> Optional[TurnOutcome]:
        """Apply one event; returns the turn it finalized, if any."""
        finalized = None
        if event.kind == END_TURN:
            return self.finalize_pending()
        if (self._pending_last_end is not None
                and event.begin_time - self._pending_last_end > self.state.idle_timeout):
            finalized = self.finalize_pending()
        self._pending.append(event)
        end = event.end_time
        self._pending_last_end = end if self._pending_last_end is None \
            else max(self._pending_last_end, end)
        return finalized

    def finalize_pending(self) -> Optional[TurnOutcome]:
        if not self._pending:
            return None
        turn = turn_from_events(self._pending)
        self._pending = []
        self._pending_last_end = None
        return self._resolve_turn(turn)

    def _resolve_turn(self, turn: Turn) -> TurnOutcome:
        focus_before = set(self.state.focus_ids)
        vectors = build_status_vectors(turn, self.state, self.lexicon)
        trace = ResolveTrace() if self.with_trace else None
        started = time.perf_counter()
        result = self.resolver(vectors, self.table, self.config, self.scene, trace)
        elapsed = time.perf_counter() - started
        self.state = update_focus(self.state, result)
        outcome = TurnOutcome(
            turn_number=len(self.outcomes) + 1,
            turn=turn,
            vectors=vectors,
            result=result,
            category=categorize_turn(turn, self.lexicon),
            focus_before=focus_before,
            focus_after=set(self.state.focus_ids),
            resolve_seconds=elapsed,
            trace=trace,
        )
        self.outcomes.append(outcome)
        return outcome


def replay_events(scene: Scene, events: list[Event], resolver: str = "greedy",
                  lexicon: Optional[Lexicon] = None,
                  table: Optional[LikelihoodTable] = None,
                  config: ResolverConfig = ResolverConfig(),
                  idle_timeout: float = DEFAULT_IDLE_TIMEOUT_MS,
                  with_trace: bool = False) -> list[TurnOutcome]:
    """Batch replay of a recorded event stream through one session."""
    runtime = SessionRuntime(scene, resolver, lexicon, table, config,
                             idle_timeout, with_trace)
    for event in events:
        runtime.post_event(event)
    runtime.finalize_pending()
    return runtime.outcomes
