// End-to-end: drive the showcase scenario through the console's own building
// blocks (drag -> gesture records, typed utterance -> token records) against
// a live service process, then check the service's answer matches a CLI-side
// replay of the exact event log the console sent, and that the expected
// objects light up.

import { execFileSync, spawn, ChildProcess } from 'node:child_process';
import { mkdtempSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join, resolve } from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { SessionApi } from '../src/api.js';
import { endTurnEvent, gestureFromDrag, tokenizeUtterance } from '../src/events.js';
import { computeHighlights, highlightedIds } from '../src/state.js';
import type { EventRecord } from '../src/types.js';

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = resolve(fileURLToPath(new URL('.', import.meta.url)), '..', '..');

let service: ChildProcess;

async function waitForService(api: SessionApi): Promise<void> {
  for (let attempt = 0; attempt < 60; attempt++) {
    try {
      await api.scene();
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 250));
    }
  }
  throw new Error('service did not come up');
}

beforeAll(async () => {
  service = spawn(
    'python3',
    ['-m', 'mmref.cli', 'serve', '--scene', 'golden', '--addr', `127.0.0.1:${PORT}`],
    { cwd: REPO_ROOT, stdio: 'ignore' },
  );
  await waitForService(new SessionApi(BASE));
}, 30000);

afterAll(() => {
  service?.kill();
});

function click(at: [number, number], timeMs: number): EventRecord {
  // a click is a zero-length drag at the press position
  return gestureFromDrag({ from: at, to: at, beginMs: timeMs, endMs: timeMs + 120 });
}

describe('showcase scenario through the console pipeline', () => {
  it('matches the CLI replay of its own event log and highlights the referents', async () => {
    const api = new SessionApi(BASE);
    const session = await api.createSession({});

    // turn 1: click the house at (400, 300), type "how much is this house"
    const turn1: EventRecord[] = [
      click([400, 300], 0),
      ...tokenizeUtterance('how much is this house', 500, 1700),
    ];
    // turn 2 after an idle gap: three clicks, then the complex utterance
    const turn2: EventRecord[] = [
      click([100, 100], 4200),
      click([202, 100], 4700),
      click([248, 100], 5200),
      ...tokenizeUtterance('compare it with these houses', 5600, 6900),
    ];
    await api.postEvents(session, turn1);
    await api.postEvents(session, turn2);
    await api.postEvents(session, [endTurnEvent(7200)]);

    const live = await api.resolution(session, { turn: 'latest' });
    expect(live.turn).toBe(2);
    expect(live.category).toBe('complex');

    const assigned = Object.fromEntries(
      Object.entries(live.result.assignments).map(([index, group]) => [
        index,
        group.map((a) => a.object).sort(),
      ]),
    );
    expect(assigned).toEqual({ '1': ['h8'], '2': ['h1', 'h3', 'h9'] });
    expect(live.result.unresolved).toEqual([]);

    // CLI replay of the recorded event log must reproduce the same result:
    // evaluate the log as a scenario whose gold is the live answer.
    const firstTurn = await api.resolution(session, { turn: 1 });
    const scenario = {
      id: 'console-recording',
      category: 'complex',
      scene: 'golden',
      events: [...turn1, ...turn2].map((record) => ({
        kind: record.kind,
        payload: record.payload,
      })),
      gold: [
        Object.fromEntries(
          Object.entries(firstTurn.result.assignments).map(([index, group]) => [
            index,
            group.map((a) => a.object).sort(),
          ]),
        ),
        assigned,
      ],
    };
    const dir = mkdtempSync(join(tmpdir(), 'mmref-console-'));
    const corpusPath = join(dir, 'recorded.jsonl');
    const reportPath = join(dir, 'report.json');
    writeFileSync(corpusPath, JSON.stringify(scenario) + '\n');
    execFileSync(
      'python3',
      ['-m', 'mmref.cli', 'eval', '--corpus', corpusPath, '--out', reportPath],
      { cwd: REPO_ROOT },
    );
    const report = JSON.parse(readFileSync(reportPath, 'utf-8'));
    expect(report.excluded).toEqual([]);
    expect(report.overall.total).toBe(2);
    expect(report.overall.correct).toBe(2);

    // the three pointed houses plus the focused house light up
    const highlights = computeHighlights(live);
    expect(highlightedIds(highlights)).toEqual(new Set(['h1', 'h3', 'h8', 'h9']));
    expect(highlights.get('h8')?.role).toBe('referent');

    // ablation toggle path: a second call with ablate produces a diff
    const ablated = await api.resolution(session, { turn: 'latest', ablate: true });
    expect(ablated.result.assignments).not.toEqual(live.result.assignments);
  }, 30000);

  it('drag circles capture regions like recorded circle gestures', async () => {
    const api = new SessionApi(BASE);
    const session = await api.createSession({});
    // drag diagonally across the two-house cluster near (220,300)-(300,220)
    const drag = gestureFromDrag({
      from: [205, 315], to: [315, 205], beginMs: 0, endMs: 350,
    });
    await api.postEvents(session, [
      drag,
      ...tokenizeUtterance('compare these houses', 600, 1400),
      endTurnEvent(1600),
    ]);
    const live = await api.resolution(session, { turn: 'latest' });
    expect(live.result.assignments['1'].map((a) => a.object).sort()).toEqual(['h5', 'h6']);
  }, 15000);
});
