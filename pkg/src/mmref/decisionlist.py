"""Four-step decision-list baseline.

Deliberately limited: it handles at most one referring expression and one
unambiguous gesture per turn, trying gesture, then the focused object, then
a unique semantically compatible visible object, then a proper-name lookup.
Anything outside that envelope is declined with a reason code; those
documented weaknesses are what the richer resolvers are measured against.
"""

from __future__ import annotations

from typing import Optional

from dataclasses import replace

from .domain import (Assignment, ReferringExpression, ResolutionResult, Scene,
                     SceneObject, Status, StatusVectors)
from .greedy import _static_compatible, identifier_lookup


def _semantically_compatible(obj: SceneObject, expression: ReferringExpression) -> bool:
    # type and attribute constraints only; identifiers belong to step 4
    return _static_compatible(obj, replace(expression, target_identifier=None))

REASON_COMPLEX = "complex-input"
REASON_AMBIGUOUS = "ambiguous-gesture"
REASON_NO_MATCH = "no-match"


def _decline(result: ResolutionResult, expressions: list[ReferringExpression],
             reason: str) -> ResolutionResult:
    for e in expressions:
        result.unresolved.append(e.order_index)
        result.reasons[e.order_index] = reason
    return result


def resolve_decision_list(vectors: StatusVectors, scene: Scene,
                          config=None) -> ResolutionResult:
    result = ResolutionResult()
    expressions = list(vectors.r)
    if not expressions:
        return result
    if len(expressions) > 1:
        return _decline(result, expressions, REASON_COMPLEX)

    expression = expressions[0]
    gesture_indices = {c.gesture_order_index for c in vectors.g}
    if len(gesture_indices) > 1:
        return _decline(result, expressions, REASON_COMPLEX)

    # Step 1: a gestured object is chosen outright, but only when unique.
    if vectors.g:
        distinct = {c.object.id for c in vectors.g}
        if len(distinct) > 1:
            return _decline(result, expressions, REASON_AMBIGUOUS)
        chosen = vectors.g[0].object
        result.assignments[expression.order_index] = [
            Assignment(chosen.id, 1.0, f"{Status.GESTURE.value}/step-1")]
        return result

    # Step 2: the currently selected object, if it meets the constraints.
    if len(vectors.f) == 1:
        focused = vectors.f[0].object
        if _semantically_compatible(focused, expression):
            result.assignments[expression.order_index] = [
                Assignment(focused.id, 1.0, f"{Status.FOCUS.value}/step-2")]
            return result

    # Step 3: a unique semantically compatible visible object.
    visible = [o for o in scene.visible_objects()
               if _semantically_compatible(o, expression)]
    if len(visible) == 1:
        result.assignments[expression.order_index] = [
            Assignment(visible[0].id, 1.0, f"{Status.DISPLAY.value}/step-3")]
        return result

    # Step 4: a full NP names its referent outright.
    found: Optional[SceneObject] = identifier_lookup(expression, list(scene.objects))
    if found is not None:
        result.assignments[expression.order_index] = [
            Assignment(found.id, 1.0, "identifier/step-4")]
        return result

    return _decline(result, expressions, REASON_NO_MATCH)
