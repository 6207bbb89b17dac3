// Derived view state: which objects to highlight and how resolutions differ
// between configurations (for the ablation toggle).

import type { ResolutionResponse, ResolutionResultDoc } from './types.js';

export interface Highlight {
  role: 'referent' | 'focus';
  expressions: number[]; // expression order indices that claimed the object
}

export type HighlightMap = Map<string, Highlight>;

// Referents of the shown turn get expression-coded highlights; focus objects
// that were not (re-)assigned keep a plain focus ring.
export function computeHighlights(response: ResolutionResponse): HighlightMap {
  const highlights: HighlightMap = new Map();
  for (const [index, group] of Object.entries(response.result.assignments)) {
    for (const assignment of group) {
      const existing = highlights.get(assignment.object);
      if (existing) {
        existing.expressions.push(Number(index));
      } else {
        highlights.set(assignment.object, {
          role: 'referent',
          expressions: [Number(index)],
        });
      }
    }
  }
  for (const objectId of response.focus) {
    if (!highlights.has(objectId)) {
      highlights.set(objectId, { role: 'focus', expressions: [] });
    }
  }
  for (const h of highlights.values()) {
    h.expressions.sort((a, b) => a - b);
  }
  return highlights;
}

export function highlightedIds(highlights: HighlightMap): Set<string> {
  return new Set(highlights.keys());
}

export interface ExpressionDiff {
  expression: number;
  added: string[]; // referents only the alternate run assigned
  removed: string[]; // referents only the baseline run assigned
}

// Per-expression referent difference between two resolutions of one turn.
export function diffResolutions(
  baseline: ResolutionResultDoc,
  alternate: ResolutionResultDoc,
): ExpressionDiff[] {
  const indices = new Set<number>();
  for (const key of Object.keys(baseline.assignments)) {
    indices.add(Number(key));
  }
  for (const key of Object.keys(alternate.assignments)) {
    indices.add(Number(key));
  }
  for (const index of baseline.unresolved) {
    indices.add(index);
  }
  for (const index of alternate.unresolved) {
    indices.add(index);
  }
  const diffs: ExpressionDiff[] = [];
  for (const index of [...indices].sort((a, b) => a - b)) {
    const before = new Set(
      (baseline.assignments[String(index)] ?? []).map((a) => a.object),
    );
    const after = new Set(
      (alternate.assignments[String(index)] ?? []).map((a) => a.object),
    );
    const added = [...after].filter((id) => !before.has(id)).sort();
    const removed = [...before].filter((id) => !after.has(id)).sort();
    if (added.length > 0 || removed.length > 0) {
      diffs.push({ expression: index, added, removed });
    }
  }
  return diffs;
}

export function describeResult(result: ResolutionResultDoc): string {
  const parts: string[] = [];
  for (const [index, group] of Object.entries(result.assignments).sort(
    (a, b) => Number(a[0]) - Number(b[0]),
  )) {
    parts.push(`${index} -> ${group.map((a) => a.object).join(', ')}`);
  }
  for (const index of result.unresolved) {
    const reason = result.reasons[String(index)];
    parts.push(`${index} unresolved${reason ? ` (${reason})` : ''}`);
  }
  return parts.join('; ') || 'nothing to resolve';
}
