"""Turn segmentation and per-turn context assembly.

The event stream (tokens + gestures) is cut into turns at idle gaps; each
turn is then lifted into the StatusVectors quadruple: gesture candidates,
focus carried over from the previous turn's resolution, remaining visible
objects, and the parsed referring expressions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Optional

from .domain import (CandidateObject, GestureEvent, ResolutionResult, Scene,
                     Status, StatusVectors)
from .gestures import build_gesture_vector
from .parsing import Lexicon, Token, extract_referring_expressions, make_empty_expression

DEFAULT_IDLE_TIMEOUT_MS = 2000.0

TOKEN = "token"
GESTURE = "gesture"
END_TURN = "end-turn"


@dataclass(frozen=True)
class Event:
    """One item of the session stream: a token, a gesture, or an end-turn mark."""

    kind: str
    begin_time: float
    end_time: float
    payload: dict[str, Any] = field(default_factory=dict)


def event_from_record(record: dict[str, Any]) -> Event:
    kind = record.get("kind")
    payload = dict(record.get("payload", {}))
    if kind == TOKEN:
        begin = float(payload["begin"])
        end = float(payload.get("end", begin))
    elif kind == GESTURE:
        begin = float(payload["begin"])
        end = float(payload.get("end", begin))
    elif kind == END_TURN:
        begin = end = float(record.get("time", payload.get("time", 0.0)))
    else:
        raise ValueError(f"unknown event kind: {kind!r}")
    return Event(kind, begin, end, payload)


@dataclass
class Turn:
    tokens: list[Token] = field(default_factory=list)
    gestures: list[GestureEvent] = field(default_factory=list)

    @property
    def begin_time(self) -> float:
        times = [t.begin_time for t in self.tokens] + [g.begin_time for g in self.gestures]
        return min(times) if times else 0.0

    @property
    def end_time(self) -> float:
        times = [t.end_time for t in self.tokens] + [g.end_time for g in self.gestures]
        return max(times) if times else 0.0

    def has_content(self) -> bool:
        return bool(self.tokens or self.gestures)


def turn_from_events(events: list[Event]) -> Turn:
    turn = Turn()
    gesture_events = []
    for ev in events:
        if ev.kind == TOKEN:
            turn.tokens.append(Token(str(ev.payload["text"]).lower(),
                                     ev.begin_time, ev.end_time))
        elif ev.kind == GESTURE:
            gesture_events.append(ev)
    turn.tokens.sort(key=lambda t: t.begin_time)
    gesture_events.sort(key=lambda e: e.begin_time)
    for order, ev in enumerate(gesture_events, start=1):
        p = ev.payload
        turn.gestures.append(GestureEvent(
            kind=str(p.get("kind", "point")),
            focus_point=(float(p["at"][0]), float(p["at"][1])),
            radius=float(p.get("radius", 0.0)),
            begin_time=ev.begin_time,
            end_time=ev.end_time,
            order_index=order,
        ))
    return turn


def segment_turns(events: list[Event],
                  idle_timeout: float = DEFAULT_IDLE_TIMEOUT_MS) -> list[Turn]:
    """Split a time-ordered event stream at gaps exceeding idle_timeout.

    An explicit end-turn event forces a boundary without itself belonging to
    any turn.  No token or gesture event is lost or duplicated.
    """
    turns: list[Turn] = []
    pending: list[Event] = []
    last_end: Optional[float] = None

    def flush() -> None:
        nonlocal last_end
        if pending:
            turns.append(turn_from_events(pending))
            pending.clear()
        last_end = None

    for ev in events:
        if ev.kind == END_TURN:
            flush()
            continue
        if last_end is not None and ev.begin_time - last_end > idle_timeout:
            flush()
        pending.append(ev)
        last_end = ev.end_time if last_end is None else max(last_end, ev.end_time)
    flush()
    return turns


@dataclass
class SessionState:
    """Focus carried between turns of one session."""

    scene: Scene
    focus_ids: set[str] = field(default_factory=set)
    turn_counter: int = 0
    idle_timeout: float = DEFAULT_IDLE_TIMEOUT_MS

    def __post_init__(self) -> None:
        if self.idle_timeout <= 0:
            raise ValueError("idle_timeout must be positive")
        unknown = self.focus_ids - self.scene.ids
        if unknown:
            raise ValueError(f"focus ids not in scene: {sorted(unknown)}")


def build_status_vectors(turn: Turn, session: SessionState, lexicon: Lexicon,
                         capture_radius: float | None = None) -> StatusVectors:
    """Assemble the per-turn quadruple from gestures, focus, and the display.

    Focus keeps only objects not re-selected by a gesture this turn; the
    display vector holds the remaining visible objects.  Both get uniform
    selection probabilities.  A content-bearing turn with no parsed
    expression contributes one synthesized empty-category expression so
    context alone can still resolve the turn.
    """
    scene = session.scene
    g = build_gesture_vector(turn.gestures, scene, capture_radius)
    gestured_ids = {c.object.id for c in g}

    focus_objects = [scene.by_id(i) for i in sorted(session.focus_ids - gestured_ids)
                     if scene.get(i) is not None]
    f = [CandidateObject(obj, Status.FOCUS, 1.0 / len(focus_objects))
         for obj in focus_objects]

    focus_ids = {o.id for o in focus_objects}
    display_objects = [o for o in scene.visible_objects()
                       if o.id not in gestured_ids and o.id not in focus_ids]
    d = [CandidateObject(obj, Status.DISPLAY, 1.0 / len(display_objects))
         for obj in display_objects]

    r = extract_referring_expressions(turn.tokens, lexicon)
    if not r and turn.has_content():
        r = [make_empty_expression(turn.begin_time)]

    vectors = StatusVectors(g=g, f=f, d=d, r=r)
    vectors.validate()
    return vectors


def update_focus(session: SessionState, result: ResolutionResult) -> SessionState:
    """Next-turn focus = referents just resolved; an empty result keeps focus."""
    assigned = result.all_assigned_ids()
    new_focus = set(assigned) if assigned else set(session.focus_ids)
    return replace(session, focus_ids=new_focus, turn_counter=session.turn_counter + 1)
