"""JSON/HTTP session service for live resolution.

Sessions are in-memory; events carry client timestamps (ms since the
session's epoch) and turns finalize on an idle gap, an explicit end-turn
event, or server-side idle expiry when a resolution is requested.  Reads
see fully applied turns only.
"""

from __future__ import annotations

import itertools
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .context import DEFAULT_IDLE_TIMEOUT_MS, END_TURN, GESTURE, TOKEN, Event
from .domain import Scene
from .replay import RESOLVERS, SessionRuntime, TurnOutcome
from .scoring import (ResolverConfig, TemporalMode, compatibility_factors,
                      match_score, object_selectivity, status_likelihood)

SCHEMA_VERSION = "1"


def _ok(payload: dict[str, Any], status_code: int = 200) -> JSONResponse:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    return JSONResponse(payload, status_code=status_code)


def _error(status_code: int, code: str, detail: Any) -> JSONResponse:
    return JSONResponse({"schema_version": SCHEMA_VERSION,
                         "error": code, "detail": detail}, status_code=status_code)


@dataclass
class _Session:
    runtime: SessionRuntime
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_accepted: Optional[float] = None
    last_arrival: Optional[float] = None  # monotonic seconds


def _parse_event(record: dict[str, Any]) -> Event:
    kind = record.get("kind")
    if kind not in (TOKEN, GESTURE, END_TURN):
        raise ValueError(f"unknown event kind {kind!r}")
    payload = record.get("payload")
    if kind == END_TURN:
        time_value = record.get("time", (payload or {}).get("time"))
        if time_value is None:
            raise ValueError("end-turn event requires a time")
        return Event(END_TURN, float(time_value), float(time_value), {})
    if not isinstance(payload, dict):
        raise ValueError("event requires a payload object")
    if kind == TOKEN:
        for key in ("text", "begin", "end"):
            if key not in payload:
                raise ValueError(f"token event missing {key!r}")
    else:
        if "at" not in payload or "begin" not in payload:
            raise ValueError("gesture event missing 'at' or 'begin'")
        if payload.get("kind") not in ("point", "circle"):
            raise ValueError("gesture payload kind must be point or circle")
    begin = float(payload["begin"])
    end = float(payload.get("end", begin))
    if end < begin:
        raise ValueError("event end precedes begin")
    return Event(kind, begin, end, dict(payload))


def _vectors_payload(outcome: TurnOutcome) -> dict[str, Any]:
    v = outcome.vectors

    def candidate(c):
        rec = {"object": c.object.id, "probability": c.selection_probability}
        if c.gesture_order_index is not None:
            rec["gesture_index"] = c.gesture_order_index
        return rec

    return {
        "g": [candidate(c) for c in v.g],
        "f": [candidate(c) for c in v.f],
        "d": [candidate(c) for c in v.d],
        "r": [{"index": e.order_index, "surface": e.surface,
               "category": e.category.value, "number": e.target_number,
               "type": e.target_semantic_type}
              for e in v.r],
    }


def _breakdown_payload(outcome: TurnOutcome, runtime: SessionRuntime,
                       config: ResolverConfig) -> list[dict[str, Any]]:
    v = outcome.vectors
    table = runtime.table.renormalized() if config.renormalize_table else runtime.table
    rows = []
    for cand in itertools.chain(v.g, v.f, v.d):
        for expr in v.r:
            factors = compatibility_factors(cand, expr, config.temporal_mode,
                                            config.tau_ms)
            rows.append({
                "expression": expr.order_index,
                "surface": expr.surface,
                "object": cand.object.id,
                "status": cand.status.value,
                "gesture_index": cand.gesture_order_index,
                "selectivity": object_selectivity(cand, v),
                "status_likelihood": status_likelihood(expr.category, cand.status,
                                                       table),
                "compatibility": factors.as_dict(),
                "score": match_score(cand, expr, v, table, config),
            })
    return rows


def create_app(scene: Scene, idle_timeout: float = DEFAULT_IDLE_TIMEOUT_MS) -> FastAPI:
    app = FastAPI(title="mmref session service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    sessions: dict[str, _Session] = {}
    counter = itertools.count(1)
    store_lock = threading.Lock()

    def get_session(session_id: str) -> Optional[_Session]:
        with store_lock:
            return sessions.get(session_id)

    @app.get("/scene")
    def get_scene() -> JSONResponse:
        return _ok({"scene": scene.as_dict()})

    @app.post("/sessions")
    async def create_session(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except Exception:
            body = {}
        body = body or {}
        resolver = body.get("resolver", "greedy")
        if resolver not in RESOLVERS:
            return _error(422, "unknown-resolver", sorted(RESOLVERS))
        try:
            config = ResolverConfig(
                temporal_mode=TemporalMode(body.get("temporal_mode", "ordering")),
                ablate_cognitive=bool(body.get("ablate_cognitive", False)),
                renormalize_table=bool(body.get("renormalize_table", False)),
            )
            timeout = float(body.get("idle_timeout_ms", idle_timeout))
            runtime = SessionRuntime(scene, resolver, config=config,
                                     idle_timeout=timeout)
        except (ValueError, KeyError) as exc:
            return _error(422, "bad-session-config", str(exc))
        session_id = f"s{next(counter)}"
        with store_lock:
            sessions[session_id] = _Session(runtime=runtime)
        return _ok({"session": session_id, "resolver": resolver}, status_code=201)

    @app.post("/sessions/{session_id}/events")
    async def post_events(session_id: str, request: Request) -> JSONResponse:
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown-session", session_id)
        try:
            body = await request.json()
        except Exception:
            return _error(422, "malformed-json", "request body must be JSON")
        records = body if isinstance(body, list) else [body]
        try:
            events = [_parse_event(r) for r in records]
        except (ValueError, TypeError) as exc:
            return _error(422, "malformed-event", str(exc))
        with session.lock:
            for event in events:
                if (session.last_accepted is not None
                        and event.begin_time < session.last_accepted):
                    return _error(409, "stale-event",
                                  {"event_time": event.begin_time,
                                   "last_accepted": session.last_accepted})
            finalized = []
            for event in events:
                outcome = session.runtime.post_event(event)
                session.last_accepted = event.begin_time
                session.last_arrival = time.monotonic()
                if outcome is not None:
                    finalized.append(outcome.turn_number)
        return _ok({"accepted": len(events), "turns_finalized": finalized})

    @app.get("/sessions/{session_id}/resolution")
    def get_resolution(session_id: str, turn: str = "latest",
                       ablate: bool = False) -> JSONResponse:
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown-session", session_id)
        with session.lock:
            runtime = session.runtime
            # Idle expiry: a pending turn older than the timeout finalizes now.
            if (runtime.has_pending() and session.last_arrival is not None
                    and (time.monotonic() - session.last_arrival) * 1000.0
                    >= runtime.state.idle_timeout):
                runtime.finalize_pending()
            outcomes = list(runtime.outcomes)
            focus = sorted(runtime.state.focus_ids)
        if not outcomes:
            return _ok({"session": session_id, "turn": 0, "turn_count": 0,
                        "result": {"assignments": {}, "unresolved": [],
                                   "reasons": {}, "flags": {}},
                        "focus": focus, "vectors": None, "breakdown": [],
                        "category": None})
        if turn == "latest":
            index = len(outcomes) - 1
        else:
            try:
                index = int(turn) - 1
            except ValueError:
                return _error(422, "bad-turn", turn)
            if not 0 <= index < len(outcomes):
                return _error(404, "unknown-turn", turn)
        outcome = outcomes[index]
        config = runtime.config
        result = outcome.result
        if ablate != config.ablate_cognitive:
            from dataclasses import replace

            from .greedy import resolve as resolve_greedy

            config = replace(config, ablate_cognitive=ablate)
            result = resolve_greedy(outcome.vectors, runtime.table, config,
                                    runtime.scene)
        return _ok({
            "session": session_id,
            "turn": outcome.turn_number,
            "turn_count": len(outcomes),
            "category": outcome.category,
            "result": result.as_dict(),
            "focus": focus,
            "vectors": _vectors_payload(outcome),
            "breakdown": _breakdown_payload(outcome, runtime, config),
        })

    return app
