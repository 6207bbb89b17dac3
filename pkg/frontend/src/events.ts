// Turns pointer interactions and typed utterances into service event records.
// All records carry client timestamps in session-epoch milliseconds; the
// resolver's temporal modes depend on them.

import type { EventRecord, GesturePayload, TokenPayload } from './types.js';

const GESTURE_MS = 120;
// drags shorter than this (in scene units) count as clicks, not circles
const CLICK_SLOP = 4;

export function pointEvent(at: [number, number], beginMs: number): EventRecord {
  const payload: GesturePayload = {
    kind: 'point',
    at,
    radius: 0,
    begin: beginMs,
    end: beginMs + GESTURE_MS,
  };
  return { kind: 'gesture', payload };
}

export function circleEvent(
  center: [number, number],
  radius: number,
  beginMs: number,
  endMs: number,
): EventRecord {
  const payload: GesturePayload = {
    kind: 'circle',
    at: center,
    radius,
    begin: beginMs,
    end: Math.max(endMs, beginMs),
  };
  return { kind: 'gesture', payload };
}

export interface Drag {
  from: [number, number];
  to: [number, number];
  beginMs: number;
  endMs: number;
}

// A press-release pair in scene coordinates becomes a point (short drag)
// or a circle spanning the drag extent.
export function gestureFromDrag(drag: Drag): EventRecord {
  const dx = drag.to[0] - drag.from[0];
  const dy = drag.to[1] - drag.from[1];
  const extent = Math.hypot(dx, dy);
  if (extent < CLICK_SLOP) {
    return pointEvent(drag.from, drag.beginMs);
  }
  const center: [number, number] = [
    drag.from[0] + dx / 2,
    drag.from[1] + dy / 2,
  ];
  return circleEvent(center, extent / 2, drag.beginMs, drag.endMs);
}

// Typed text stands in for speech: per-word timestamps are spread evenly
// across the typing interval so temporal scoring still has something to use.
export function tokenizeUtterance(
  text: string,
  typingBeginMs: number,
  typingEndMs: number,
): EventRecord[] {
  const words = text
    .toLowerCase()
    .replace(/[^a-z0-9\s-]/g, ' ')
    .split(/\s+/)
    .filter((w) => w.length > 0);
  if (words.length === 0) {
    return [];
  }
  const span = Math.max(typingEndMs - typingBeginMs, words.length);
  const step = span / words.length;
  const wordMs = Math.min(step * 0.75, 200);
  return words.map((word, i) => {
    const begin = typingBeginMs + i * step;
    const payload: TokenPayload = { text: word, begin, end: begin + wordMs };
    return { kind: 'token', payload } as EventRecord;
  });
}

export function endTurnEvent(timeMs: number): EventRecord {
  return { kind: 'end-turn', time: timeMs };
}

export function eventTimes(records: EventRecord[]): number[] {
  return records.map((r) => (r.payload ? r.payload.begin : r.time ?? 0));
}

// Timestamps must be monotone per session as sent.
export function isMonotone(records: EventRecord[]): boolean {
  const times = eventTimes(records);
  return times.every((t, i) => i === 0 || t >= times[i - 1]);
}
