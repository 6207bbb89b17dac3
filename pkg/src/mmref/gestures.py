"""Deictic gesture interpretation: point/circle events -> weighted candidates.

A gesture rarely singles out exactly one object (icons overlap, displays get
crowded), so each capture produces the set of visible objects in range with a
selection probability from an isotropic Gaussian kernel on distance to the
gesture's focus point.
"""

from __future__ import annotations

import logging
import math

from .domain import CandidateObject, GestureEvent, Scene, SceneObject, Status

log = logging.getLogger(__name__)


def _distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def candidates_for_gesture(gesture: GestureEvent, scene: Scene,
                           capture_radius: float | None = None,
                           normalize: bool = True) -> list[tuple[SceneObject, float]]:
    """Visible objects captured by one gesture, with selection probabilities.

    A point captures objects within capture_radius of its focus point; a
    circle extends the reach by its own radius.  Weights follow
    exp(-d^2 / (2 sigma^2)) with sigma = capture_radius / 2 and are normalized
    to sum to one per gesture unless normalize is False.
    """
    radius = scene.capture_radius if capture_radius is None else capture_radius
    if radius <= 0:
        raise ValueError("capture_radius must be positive")
    reach = radius + (gesture.radius if gesture.kind == "circle" else 0.0)
    sigma = radius / 2.0
    weighted: list[tuple[SceneObject, float]] = []
    for obj in scene.visible_objects():
        dist = _distance(obj.position, gesture.focus_point)
        if dist <= reach:
            weighted.append((obj, math.exp(-(dist * dist) / (2.0 * sigma * sigma))))
    if not weighted:
        return []
    total = sum(w for _, w in weighted)
    if normalize:
        weighted = [(o, w / total) for o, w in weighted]
    weighted.sort(key=lambda pair: (-pair[1], pair[0].id))
    return weighted


def build_gesture_vector(gestures: list[GestureEvent], scene: Scene,
                         capture_radius: float | None = None,
                         normalize: bool = True) -> list[CandidateObject]:
    """Concatenated per-gesture candidates, tagged with gesture order indices."""
    vector: list[CandidateObject] = []
    for gesture in gestures:
        candidates = candidates_for_gesture(gesture, scene, capture_radius, normalize)
        if not candidates:
            log.debug("gesture %d at %s captured nothing",
                      gesture.order_index, gesture.focus_point)
            continue
        for obj, prob in candidates:
            vector.append(CandidateObject(
                object=obj,
                status=Status.GESTURE,
                selection_probability=prob,
                gesture_order_index=gesture.order_index,
                gesture_begin_time=gesture.begin_time,
            ))
    return vector
