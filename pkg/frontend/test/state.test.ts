import { describe, expect, it } from 'vitest';

import { computeHighlights, describeResult, diffResolutions, highlightedIds } from '../src/state.js';
import type { ResolutionResponse, ResolutionResultDoc } from '../src/types.js';

function goldenResponse(): ResolutionResponse {
  return {
    schema_version: '1',
    session: 's1',
    turn: 2,
    turn_count: 2,
    category: 'complex',
    result: {
      assignments: {
        '1': [{ object: 'h8', score: 0.85, source: 'focus' }],
        '2': [
          { object: 'h9', score: 0.51, source: 'gesture' },
          { object: 'h1', score: 0.19, source: 'gesture' },
          { object: 'h3', score: 0.14, source: 'gesture' },
        ],
      },
      unresolved: [],
      reasons: {},
      flags: {},
    },
    focus: ['h1', 'h3', 'h8', 'h9'],
    vectors: null,
    breakdown: [],
  };
}

describe('computeHighlights', () => {
  it('marks every assigned referent with its expression', () => {
    const highlights = computeHighlights(goldenResponse());
    expect(highlightedIds(highlights)).toEqual(new Set(['h1', 'h3', 'h8', 'h9']));
    expect(highlights.get('h8')).toEqual({ role: 'referent', expressions: [1] });
    expect(highlights.get('h9')).toEqual({ role: 'referent', expressions: [2] });
  });

  it('focus objects not reassigned keep a focus ring', () => {
    const response = goldenResponse();
    response.focus = ['h1', 'h3', 'h8', 'h9', 'h5'];
    const highlights = computeHighlights(response);
    expect(highlights.get('h5')).toEqual({ role: 'focus', expressions: [] });
  });

  it('an object claimed by two expressions lists both', () => {
    const response = goldenResponse();
    response.result.assignments['1'].push({ object: 'h9', score: 0.3, source: 'focus' });
    const highlights = computeHighlights(response);
    expect(highlights.get('h9')).toEqual({ role: 'referent', expressions: [1, 2] });
  });
});

describe('diffResolutions', () => {
  const baseline: ResolutionResultDoc = goldenResponse().result;

  it('reports nothing when the runs agree', () => {
    expect(diffResolutions(baseline, goldenResponse().result)).toEqual([]);
  });

  it('reports per-expression referent changes', () => {
    const ablated: ResolutionResultDoc = {
      assignments: {
        '1': [{ object: 'h3', score: 1.0, source: 'gesture' }],
        '2': [
          { object: 'h9', score: 1.0, source: 'gesture' },
          { object: 'h1', score: 0.37, source: 'gesture' },
        ],
      },
      unresolved: [],
      reasons: {},
      flags: {},
    };
    expect(diffResolutions(baseline, ablated)).toEqual([
      { expression: 1, added: ['h3'], removed: ['h8'] },
      { expression: 2, added: [], removed: ['h3'] },
    ]);
  });

  it('treats newly unresolved expressions as removals', () => {
    const worse: ResolutionResultDoc = {
      assignments: {
        '2': baseline.assignments['2'],
      },
      unresolved: [1],
      reasons: { '1': 'no-candidate' },
      flags: {},
    };
    expect(diffResolutions(baseline, worse)).toEqual([
      { expression: 1, added: [], removed: ['h8'] },
    ]);
  });
});

describe('describeResult', () => {
  it('summarizes assignments and unresolved entries', () => {
    const text = describeResult({
      assignments: { '1': [{ object: 'h8', score: 0.85, source: 'focus' }] },
      unresolved: [2],
      reasons: { '2': 'no-candidate' },
      flags: {},
    });
    expect(text).toBe('1 -> h8; 2 unresolved (no-candidate)');
  });
});
