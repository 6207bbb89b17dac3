"""Reference resolution as attributed relational graph matching.

Expressions form one fully connected graph, candidate referents another;
node affinity reuses the shared pair scorer and edge affinity checks that a
pair of referents can be introduced in the same order and same-type pattern
as the pair of expressions.  A soft match-probability matrix is relaxed by
exponentiated updates with per-expression normalization until it settles,
then thresholded into assignments.  The search is the contrast point: this
optimizer weighs every pairing jointly, where the greedy resolver commits
status by status.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import (Assignment, CandidateObject, ReferringExpression,
                     ResolutionResult, Status, StatusVectors)
from .scoring import LikelihoodTable, ResolverConfig, match_score

SAME = "same"
DIFFERENT = "different"
UNKNOWN = "unknown"
BEFORE = "before"
AFTER = "after"


@dataclass(frozen=True)
class EdgeRelation:
    same_type: str  # same | different | unknown
    order: str  # before | after | same | unknown


@dataclass
class ReferringGraph:
    nodes: list[ReferringExpression]

    def edge(self, m: int, n: int) -> EdgeRelation:
        a, b = self.nodes[m], self.nodes[n]
        if a.target_semantic_type is None or b.target_semantic_type is None:
            same = UNKNOWN
        elif a.target_semantic_type.lower() == b.target_semantic_type.lower():
            same = SAME
        else:
            same = DIFFERENT
        order = BEFORE if a.order_index < b.order_index else AFTER
        return EdgeRelation(same, order)


@dataclass
class ReferentGraph:
    nodes: list[CandidateObject]
    vectors: StatusVectors

    def edge(self, x: int, y: int) -> EdgeRelation:
        a, b = self.nodes[x], self.nodes[y]
        same = SAME if a.object.semantic_type.lower() == b.object.semantic_type.lower() else DIFFERENT
        ia, ib = a.gesture_order_index, b.gesture_order_index
        if ia is None or ib is None:
            order = UNKNOWN
        elif ia < ib:
            order = BEFORE
        elif ia > ib:
            order = AFTER
        else:
            order = "same"
        return EdgeRelation(same, order)


def build_graphs(vectors: StatusVectors) -> tuple[ReferentGraph, ReferringGraph]:
    """Referent graph over all candidates (gesture, focus, display) + referring graph."""
    candidates = [*vectors.g, *vectors.f, *vectors.d]
    return ReferentGraph(candidates, vectors), ReferringGraph(list(vectors.r))


def node_similarity(candidate: CandidateObject, expression: ReferringExpression,
                    vectors: StatusVectors, table: LikelihoodTable,
                    config: ResolverConfig) -> float:
    """Same scorer as the greedy resolver, so only the search differs."""
    return match_score(candidate, expression, vectors, table, config)


def edge_similarity(referent_edge: EdgeRelation, expression_edge: EdgeRelation) -> float:
    """1 when order and same-type relations are consistent or unknown, else 0."""
    if referent_edge.order in (BEFORE, AFTER) and expression_edge.order in (BEFORE, AFTER):
        if referent_edge.order != expression_edge.order:
            return 0.0
    if referent_edge.same_type in (SAME, DIFFERENT) and expression_edge.same_type in (SAME, DIFFERENT):
        if referent_edge.same_type != expression_edge.same_type:
            return 0.0
    return 1.0


def pair_tensors(referent_graph: ReferentGraph, referring_graph: ReferringGraph,
                 table: LikelihoodTable, config: ResolverConfig
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Node affinity (N x M) and edge affinity (N x N x M x M) with zero diagonals."""
    effective = table.renormalized() if config.renormalize_table else table
    c_nodes, s_nodes = referent_graph.nodes, referring_graph.nodes
    n, m = len(c_nodes), len(s_nodes)
    node_sim = np.zeros((n, m))
    for x, cand in enumerate(c_nodes):
        for j, expr in enumerate(s_nodes):
            node_sim[x, j] = node_similarity(cand, expr, referent_graph.vectors,
                                             effective, config)
    edge_sim = np.zeros((n, n, m, m))
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            ref_edge = referent_graph.edge(x, y)
            for j in range(m):
                for k in range(m):
                    if j == k:
                        continue
                    edge_sim[x, y, j, k] = edge_similarity(
                        ref_edge, referring_graph.edge(j, k))
    return node_sim, edge_sim


def match_quality(node_sim: np.ndarray, edge_sim: np.ndarray,
                  probabilities: np.ndarray) -> float:
    """Overall compatibility of a (soft or hard) match-probability matrix."""
    node_term = float(np.sum(probabilities * node_sim))
    edge_term = float(np.einsum("xm,yn,xymn->", probabilities, probabilities, edge_sim))
    return node_term + edge_term


def mapping_quality(node_sim: np.ndarray, edge_sim: np.ndarray,
                    mapping: dict[int, int]) -> float:
    """Quality of a hard expression->referent mapping (column -> row)."""
    p = np.zeros(node_sim.shape)
    for col, row in mapping.items():
        p[row, col] = 1.0
    return match_quality(node_sim, edge_sim, p)


def _hard_mapping(probabilities: np.ndarray, viable: np.ndarray) -> dict[int, int]:
    mapping = {}
    for col in range(probabilities.shape[1]):
        column = np.where(viable[:, col], probabilities[:, col], -1.0)
        if column.max() > 0.0:
            mapping[col] = int(column.argmax())
    return mapping


def match_graphs(referent_graph: ReferentGraph, referring_graph: ReferringGraph,
                 table: LikelihoodTable, config: ResolverConfig = ResolverConfig()
                 ) -> ResolutionResult:
    """Relax match probabilities, then threshold them into assignments.

    Pairs with zero node affinity are masked out for good, which keeps
    incompatible assignments (and fully unmatchable expressions) at
    probability zero.  Non-convergence and any dip of the running hard
    assignment's quality are reported as flags, with assignments still taken
    from the final iterate.
    """
    result = ResolutionResult()
    expressions = referring_graph.nodes
    if not expressions:
        return result

    node_sim, edge_sim = pair_tensors(referent_graph, referring_graph, table, config)
    n, m = node_sim.shape
    viable = node_sim > 0.0

    if n == 0 or not viable.any():
        result.unresolved = sorted(e.order_index for e in expressions)
        result.reasons = {i: "no-candidate" for i in result.unresolved}
        return result

    # Uniform start, with a small deterministic ramp: exactly symmetric
    # candidates (uniform focus/display twins) otherwise deadlock the
    # multiplicative update in fractional splits that starve their own
    # cross-column edge support.  The perturbation sits well below any
    # meaningful affinity difference.
    ramp = 1.0 + 2e-3 * np.arange(n)[:, None]
    p = np.where(viable, ramp, 0.0)
    col_sums = p.sum(axis=0)
    p = np.divide(p, col_sums, out=np.zeros_like(p), where=col_sums > 0)

    converged = False
    ascent_violated = False
    last_quality = match_quality(node_sim, edge_sim,
                                 _mapping_matrix(_hard_mapping(p, viable), (n, m)))
    for _ in range(config.max_iter):
        support = node_sim + np.einsum("xymn,yn->xm", edge_sim, p)
        updated = np.where(viable, p * np.exp(support), 0.0)
        col_sums = updated.sum(axis=0)
        updated = np.divide(updated, col_sums, out=np.zeros_like(updated),
                            where=col_sums > 0)
        delta = float(np.abs(updated - p).max())
        p = updated
        quality = match_quality(node_sim, edge_sim,
                                _mapping_matrix(_hard_mapping(p, viable), (n, m)))
        if quality < last_quality - 1e-12:
            ascent_violated = True
        last_quality = max(last_quality, quality)
        if delta < config.tol:
            converged = True
            break

    if not converged or ascent_violated:
        result.flags["non_convergence"] = True

    candidates = referent_graph.nodes
    # The iterate is only resolved to tol, so the threshold comparison must
    # not demand finer accuracy (a symmetric two-way split approaches 0.5
    # from below and would otherwise never pass).  Probabilities within tol
    # of each other count as tied; ties prefer objects no earlier expression
    # took, so exchangeable twins spread across expressions.
    cutoff = config.threshold - config.tol
    taken: set[str] = set()
    for col, expression in enumerate(expressions):
        order = [(float(p[x, col]), candidates[x]) for x in range(n)
                 if viable[x, col] and p[x, col] >= cutoff]
        order.sort(key=lambda pair: (-round(pair[0] / config.tol),
                                     pair[1].object.id in taken,
                                     pair[1].object.id))
        chosen: list[Assignment] = []
        seen: set[str] = set()
        capacity = _capacity(expression)
        for prob, cand in order:
            if cand.object.id in seen or len(chosen) >= capacity:
                continue
            seen.add(cand.object.id)
            chosen.append(Assignment(cand.object.id, prob, cand.status.value,
                                     gesture_index=cand.gesture_order_index))
        if chosen:
            result.assignments[expression.order_index] = chosen
            taken.update(a.object_id for a in chosen)
        else:
            result.unresolved.append(expression.order_index)
            result.reasons[expression.order_index] = "below-threshold"
    result.unresolved.sort()
    return result


def _capacity(expression: ReferringExpression) -> int:
    from .greedy import assignment_capacity

    return assignment_capacity(expression)


def _mapping_matrix(mapping: dict[int, int], shape: tuple[int, int]) -> np.ndarray:
    p = np.zeros(shape)
    for col, row in mapping.items():
        p[row, col] = 1.0
    return p


def resolve_graph(vectors: StatusVectors, table: LikelihoodTable,
                  config: ResolverConfig = ResolverConfig(),
                  scene=None) -> ResolutionResult:
    """StatusVectors entry point mirroring the greedy resolver's signature."""
    referent_graph, referring_graph = build_graphs(vectors)
    return match_graphs(referent_graph, referring_graph, table, config)
