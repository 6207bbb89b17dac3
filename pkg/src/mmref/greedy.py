"""Greedy hierarchy-ordered reference resolution.

Candidates are searched one cognitive status at a time, gesture first, then
focus, then display, with a proper-name lookup as the final fallback.  The
gesture stage walks the score matrix row by row (rows follow gesture order)
and stars each row's best column no earlier than the previously starred
column, so referents align with expressions in order of occurrence.  Focus
and display carry no order, so their stages simply hand each remaining
expression its best-scoring objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .domain import (Assignment, CandidateObject, ReferringExpression,
                     ResolutionResult, Scene, SceneObject, Status, StatusVectors,
                     SINGULAR)
from .scoring import (LikelihoodTable, ResolverConfig, ScoreMatrix,
                      build_score_matrix, identifier_match)

_UNLIMITED = 10 ** 9


def assignment_capacity(expression: ReferringExpression) -> int:
    """How many referents the expression's number constraint admits."""
    number = expression.target_number
    if number == SINGULAR:
        return 1
    if isinstance(number, int):
        return number
    # plural-unnumbered and unconstrained expressions take every starred object
    return _UNLIMITED


@dataclass
class StageTrace:
    name: str
    matrix: ScoreMatrix
    stars: list[tuple[int, int]] = field(default_factory=list)  # (row, col)
    assigned: dict[int, list[Assignment]] = field(default_factory=dict)


@dataclass
class ResolveTrace:
    stages: list[StageTrace] = field(default_factory=list)
    identifier_assigned: dict[int, list[Assignment]] = field(default_factory=dict)


def _dedupe_best(entries: list[tuple[float, CandidateObject]]) -> list[tuple[float, CandidateObject]]:
    # An object selected by two gestures may star the same column twice;
    # it is still one referent, kept at its best score.
    best: dict[str, tuple[float, CandidateObject]] = {}
    for score, cand in entries:
        current = best.get(cand.object.id)
        if current is None or score > current[0]:
            best[cand.object.id] = (score, cand)
    return list(best.values())


def _take_by_capacity(entries: list[tuple[float, CandidateObject]],
                      expression: ReferringExpression) -> list[tuple[float, CandidateObject]]:
    entries = _dedupe_best(entries)
    entries.sort(key=lambda e: (-e[0], e[1].gesture_order_index or 0, e[1].object.id))
    return entries[:assignment_capacity(expression)]


def greedy_sorting_gesture(matrix: ScoreMatrix,
                           trace: Optional[StageTrace] = None
                           ) -> tuple[dict[int, list[Assignment]], list[ReferringExpression]]:
    """Order-constrained sweep of the gesture matrix.

    Rows are visited in gesture order; a row stars its highest-scoring column
    at or to the right of the last starred column.  Zero cells are never
    starred.  Starred objects are then handed to each column's expression
    under its number constraint.
    """
    stars_by_col: dict[int, list[tuple[float, CandidateObject]]] = {}
    index_max = 0
    for i, row in enumerate(matrix.cells):
        best_col = -1
        best_score = 0.0
        for j in range(index_max, len(row)):
            if row[j] > best_score:
                best_score = row[j]
                best_col = j
        if best_col < 0:
            continue
        index_max = best_col
        stars_by_col.setdefault(best_col, []).append((best_score, matrix.rows[i]))
        if trace is not None:
            trace.stars.append((i, best_col))

    assignments: dict[int, list[Assignment]] = {}
    remaining: list[ReferringExpression] = []
    for j, expression in enumerate(matrix.cols):
        starred = stars_by_col.get(j)
        if not starred:
            remaining.append(expression)
            continue
        chosen = _take_by_capacity(starred, expression)
        assignments[expression.order_index] = [
            Assignment(cand.object.id, score, Status.GESTURE.value,
                       gesture_index=cand.gesture_order_index)
            for score, cand in chosen
        ]
    if trace is not None:
        trace.assigned = assignments
    return assignments, remaining


def _greedy_sorting_unordered(matrix: ScoreMatrix, status: Status,
                              trace: Optional[StageTrace] = None
                              ) -> tuple[dict[int, list[Assignment]], list[ReferringExpression]]:
    """Focus/display stage: no order constraint, objects consumed once.

    Pairs are visited by descending score (ties: earlier expression, then
    object id) and an object is assigned while the expression has remaining
    capacity.  Zero-score pairs never assign.
    """
    pairs = []
    for i, cand in enumerate(matrix.rows):
        for j, expression in enumerate(matrix.cols):
            score = matrix.cells[i][j]
            if score > 0.0:
                pairs.append((score, expression.order_index, cand.object.id, i, j))
    pairs.sort(key=lambda p: (-p[0], p[1], p[2]))

    capacity = {e.order_index: assignment_capacity(e) for e in matrix.cols}
    taken_rows: set[int] = set()
    taken_objects: set[str] = set()
    assignments: dict[int, list[Assignment]] = {}
    for score, expr_index, object_id, i, j in pairs:
        if i in taken_rows or object_id in taken_objects:
            continue
        if capacity[expr_index] <= 0:
            continue
        assignments.setdefault(expr_index, []).append(
            Assignment(object_id, score, status.value))
        capacity[expr_index] -= 1
        taken_rows.add(i)
        taken_objects.add(object_id)
        if trace is not None:
            trace.stars.append((i, j))

    remaining = [e for e in matrix.cols if e.order_index not in assignments]
    if trace is not None:
        trace.assigned = assignments
    return assignments, remaining


def greedy_sorting_focus(matrix: ScoreMatrix, trace: Optional[StageTrace] = None):
    return _greedy_sorting_unordered(matrix, Status.FOCUS, trace)


def greedy_sorting_display(matrix: ScoreMatrix, trace: Optional[StageTrace] = None):
    return _greedy_sorting_unordered(matrix, Status.DISPLAY, trace)


def _static_compatible(obj: SceneObject, expression: ReferringExpression) -> bool:
    if identifier_match(obj.id, expression.target_identifier) == 0.0:
        return False
    if (expression.target_semantic_type is not None
            and obj.semantic_type.lower() != expression.target_semantic_type.lower()):
        return False
    for key, wanted in expression.attribute_constraints.items():
        if key in obj.attributes:
            a, b = obj.attributes[key], wanted
            if isinstance(a, (int, float)) and isinstance(b, (int, float)):
                if float(a) != float(b):
                    return False
            elif str(a).lower() != str(b).lower():
                return False
    return True


def identifier_lookup(expression: ReferringExpression,
                      pool: list[SceneObject]) -> Optional[SceneObject]:
    """Unique object whose identifier and features fit the expression, if any."""
    if expression.target_identifier is None:
        return None
    survivors = [o for o in pool if _static_compatible(o, expression)]
    return survivors[0] if len(survivors) == 1 else None


def resolve(vectors: StatusVectors, table: LikelihoodTable,
            config: ResolverConfig = ResolverConfig(),
            scene: Optional[Scene] = None,
            trace: Optional[ResolveTrace] = None) -> ResolutionResult:
    """Run the gesture, focus, display stages in hierarchy order.

    Expressions left over with an explicit identifier fall back to a lookup
    over the whole scene.  Matrices for later stages are only built (and
    their pairs only scored) while unresolved expressions remain, keeping
    the scored-pair count within one sweep of (m+n+l)*k.
    """
    result = ResolutionResult()
    if not vectors.r:
        return result

    effective_table = table.renormalized() if config.renormalize_table else table
    counter = [0]
    remaining = list(vectors.r)

    stages = ((Status.GESTURE, vectors.g, greedy_sorting_gesture),
              (Status.FOCUS, vectors.f, greedy_sorting_focus),
              (Status.DISPLAY, vectors.d, greedy_sorting_display))
    for status, candidates, sorter in stages:
        if not remaining:
            break
        if not candidates:
            continue
        sub_vectors = StatusVectors(g=vectors.g, f=vectors.f, d=vectors.d, r=remaining)
        matrix = build_score_matrix(candidates, sub_vectors, effective_table,
                                    config, counter)
        stage_trace = None
        if trace is not None:
            stage_trace = StageTrace(status.value, matrix)
            trace.stages.append(stage_trace)
        assigned, remaining = sorter(matrix, stage_trace)
        result.assignments.update(assigned)

    pool = list(scene.objects) if scene is not None else [
        c.object for c in (*vectors.g, *vectors.f, *vectors.d)]
    still_remaining = []
    for expression in remaining:
        found = identifier_lookup(expression, pool)
        if found is not None:
            entry = [Assignment(found.id, 1.0, "identifier")]
            result.assignments[expression.order_index] = entry
            if trace is not None:
                trace.identifier_assigned[expression.order_index] = entry
        else:
            still_remaining.append(expression)

    for expression in still_remaining:
        result.unresolved.append(expression.order_index)
        result.reasons[expression.order_index] = "no-candidate"
    result.unresolved.sort()
    result.score_evaluations = counter[0]
    return result
