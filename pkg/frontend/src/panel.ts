// Score-explanation rows: why each candidate did or did not win an
// expression. Values are shown exactly as the service reported them.

import type { BreakdownRow, ResolutionResponse } from './types.js';

export interface ExplanationRow {
  object: string;
  status: string;
  selectivity: string;
  likelihood: string;
  compatibility: string;
  score: string;
  winner: boolean;
}

export function formatScore(value: number): string {
  if (value === 0) {
    return '0';
  }
  if (value >= 0.0001) {
    return value.toFixed(4);
  }
  return value.toExponential(2);
}

function compatibilityLabel(row: BreakdownRow): string {
  const c = row.compatibility;
  const hard = c.identifier * c.semantic * c.attributes;
  if (hard === 0) {
    const vetoed = [
      c.identifier === 0 ? 'identifier' : null,
      c.semantic === 0 ? 'type' : null,
      c.attributes === 0 ? 'attributes' : null,
    ].filter((x) => x !== null);
    return `vetoed: ${vetoed.join(', ')}`;
  }
  return `temporal ${formatScore(c.temporal)}`;
}

export function explanationRows(
  response: ResolutionResponse,
  expressionIndex: number,
): ExplanationRow[] {
  const winners = new Set(
    (response.result.assignments[String(expressionIndex)] ?? []).map((a) => a.object),
  );
  return response.breakdown
    .filter((row) => row.expression === expressionIndex)
    .sort((a, b) => b.score - a.score || a.object.localeCompare(b.object))
    .map((row) => ({
      object: row.status === 'gesture' && row.gesture_index !== null
        ? `${row.object} (gesture ${row.gesture_index})`
        : row.object,
      status: row.status,
      selectivity: formatScore(row.selectivity),
      likelihood: formatScore(row.status_likelihood),
      compatibility: compatibilityLabel(row),
      score: formatScore(row.score),
      winner: winners.has(row.object),
    }));
}

export function expressionChoices(
  response: ResolutionResponse,
): { index: number; label: string }[] {
  if (!response.vectors) {
    return [];
  }
  return response.vectors.r.map((e) => ({
    index: e.index,
    label: `${e.index}: ${e.surface || '(empty)'} [${e.category}]`,
  }));
}
