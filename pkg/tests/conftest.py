from __future__ import annotations

import pytest

from mmref.context import Event
from mmref.defaults import builtin_scene, default_lexicon, default_likelihood_table


def token_event(word: str, begin: float, duration: float = 150.0) -> Event:
    return Event("token", begin, begin + duration,
                 {"text": word, "begin": begin, "end": begin + duration})


def point_event(x: float, y: float, begin: float, duration: float = 150.0) -> Event:
    return Event("gesture", begin, begin + duration,
                 {"kind": "point", "at": [x, y], "radius": 0,
                  "begin": begin, "end": begin + duration})


def circle_event(x: float, y: float, radius: float, begin: float,
                 duration: float = 150.0) -> Event:
    return Event("gesture", begin, begin + duration,
                 {"kind": "circle", "at": [x, y], "radius": radius,
                  "begin": begin, "end": begin + duration})


def utterance_events(text: str, begin: float, step: float = 200.0) -> list[Event]:
    events = []
    t = begin
    for word in text.split():
        events.append(token_event(word, t))
        t += step
    return events


def golden_events() -> list[Event]:
    """Two-turn session: focus setup on h8, then the three-point complex turn."""
    events = [point_event(400, 300, 0)]
    events += utterance_events("how much is this house", 300)
    events += [point_event(100, 100, 3750), point_event(202, 100, 4150),
               point_event(248, 100, 4550)]
    events += utterance_events("compare it with these houses", 4950)
    return events


@pytest.fixture(scope="session")
def golden_scene():
    return builtin_scene("golden")


@pytest.fixture(scope="session")
def grid_scene():
    return builtin_scene("grid")


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def table():
    return default_likelihood_table()
