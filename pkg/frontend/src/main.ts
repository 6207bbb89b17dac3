// Console wiring: one live session against the service, canvas gestures,
// a typed-utterance box, and the explanation/diff panels.

import { SessionApi } from './api.js';
import { SessionClock } from './clock.js';
import { endTurnEvent, gestureFromDrag, tokenizeUtterance } from './events.js';
import { expressionChoices, explanationRows } from './panel.js';
import { computeHighlights, describeResult, diffResolutions } from './state.js';
import { drawPendingGesture, drawScene, expressionColor } from './render.js';
import { canvasLengthToScene, canvasToScene, fitScene, Viewport } from './viewport.js';
import type { EventRecord, ResolutionResponse, SceneDoc } from './types.js';

const SERVICE_BASE =
  new URLSearchParams(window.location.search).get('service') ?? 'http://127.0.0.1:8077';

const api = new SessionApi(SERVICE_BASE);
const clock = new SessionClock();

const canvas = document.getElementById('map') as HTMLCanvasElement;
const ctx = canvas.getContext('2d')!;
const utterance = document.getElementById('utterance') as HTMLInputElement;
const sendButton = document.getElementById('send') as HTMLButtonElement;
const endTurnButton = document.getElementById('end-turn') as HTMLButtonElement;
const ablateToggle = document.getElementById('ablate') as HTMLInputElement;
const statusLine = document.getElementById('status') as HTMLElement;
const resultLine = document.getElementById('result') as HTMLElement;
const diffLine = document.getElementById('diff') as HTMLElement;
const expressionSelect = document.getElementById('expression') as HTMLSelectElement;
const explanationBody = document.getElementById('explanation') as HTMLTableSectionElement;

let scene: SceneDoc;
let viewport: Viewport;
let session = '';
let latest: ResolutionResponse | null = null;
let typingBegin: number | null = null;
let dragStart: { canvas: [number, number]; timeMs: number } | null = null;
let offline: EventRecord[] = [];

function setStatus(text: string, isError = false): void {
  statusLine.textContent = text;
  statusLine.className = isError ? 'error' : '';
}

async function post(records: EventRecord[]): Promise<void> {
  if (records.length === 0) {
    return;
  }
  try {
    if (offline.length > 0) {
      const queued = offline;
      offline = [];
      await api.postEvents(session, queued);
    }
    await api.postEvents(session, records);
  } catch (err) {
    offline.push(...records);
    setStatus(`offline, ${offline.length} event(s) queued: ${err}`, true);
  }
}

function redraw(): void {
  const highlights = latest ? computeHighlights(latest) : new Map();
  drawScene(ctx, scene, viewport, highlights);
}

async function refreshResolution(): Promise<void> {
  latest = await api.resolution(session, { turn: 'latest' });
  redraw();
  resultLine.textContent = latest.turn === 0
    ? 'no finalized turn yet'
    : `turn ${latest.turn} [${latest.category}]: ${describeResult(latest.result)}`;

  expressionSelect.innerHTML = '';
  for (const choice of expressionChoices(latest)) {
    const option = document.createElement('option');
    option.value = String(choice.index);
    option.textContent = choice.label;
    expressionSelect.appendChild(option);
  }
  renderExplanation();

  if (ablateToggle.checked && latest.turn > 0) {
    const ablated = await api.resolution(session, { turn: 'latest', ablate: true });
    const diffs = diffResolutions(latest.result, ablated.result);
    diffLine.textContent = diffs.length === 0
      ? 'ablation changes nothing on this turn'
      : diffs
          .map((d) => `expr ${d.expression}: +[${d.added}] -[${d.removed}]`)
          .join('; ');
  } else {
    diffLine.textContent = '';
  }
}

function renderExplanation(): void {
  explanationBody.innerHTML = '';
  if (!latest || latest.turn === 0) {
    return;
  }
  const index = Number(expressionSelect.value || '1');
  for (const row of explanationRows(latest, index)) {
    const tr = document.createElement('tr');
    if (row.winner) {
      tr.style.background = expressionColor(index) + '33';
    }
    for (const cell of [row.object, row.status, row.selectivity, row.likelihood,
                        row.compatibility, row.score]) {
      const td = document.createElement('td');
      td.textContent = cell;
      tr.appendChild(td);
    }
    explanationBody.appendChild(tr);
  }
}

canvas.addEventListener('mousedown', (e) => {
  dragStart = { canvas: [e.offsetX, e.offsetY], timeMs: clock.now() };
});

canvas.addEventListener('mousemove', (e) => {
  if (!dragStart) {
    return;
  }
  redraw();
  const from = canvasToScene(viewport, dragStart.canvas);
  const to = canvasToScene(viewport, [e.offsetX, e.offsetY]);
  const extent = Math.hypot(to[0] - from[0], to[1] - from[1]);
  const center: [number, number] = [(from[0] + to[0]) / 2, (from[1] + to[1]) / 2];
  drawPendingGesture(ctx, viewport, extent < canvasLengthToScene(viewport, 4) ? from : center,
                     extent / 2);
});

canvas.addEventListener('mouseup', async (e) => {
  if (!dragStart) {
    return;
  }
  const record = gestureFromDrag({
    from: canvasToScene(viewport, dragStart.canvas),
    to: canvasToScene(viewport, [e.offsetX, e.offsetY]),
    beginMs: dragStart.timeMs,
    endMs: clock.now(),
  });
  dragStart = null;
  redraw();
  await post([record]);
  setStatus(`sent ${((record.payload as { kind: string }).kind)} gesture`);
});

utterance.addEventListener('input', () => {
  if (typingBegin === null && utterance.value.length > 0) {
    typingBegin = clock.now();
  }
  if (utterance.value.length === 0) {
    typingBegin = null;
  }
});

async function sendUtterance(): Promise<void> {
  const text = utterance.value.trim();
  if (text.length === 0) {
    return;
  }
  const records = tokenizeUtterance(text, typingBegin ?? clock.now(), clock.now());
  utterance.value = '';
  typingBegin = null;
  await post(records);
  setStatus(`sent ${records.length} token(s)`);
}

sendButton.addEventListener('click', sendUtterance);
utterance.addEventListener('keydown', (e) => {
  if (e.key === 'Enter') {
    void sendUtterance();
  }
});

endTurnButton.addEventListener('click', async () => {
  await post([endTurnEvent(clock.now())]);
  await refreshResolution();
  setStatus('turn closed');
});

ablateToggle.addEventListener('change', () => void refreshResolution());
expressionSelect.addEventListener('change', renderExplanation);

async function start(): Promise<void> {
  try {
    scene = await api.scene();
    viewport = fitScene(scene, canvas.width, canvas.height);
    session = await api.createSession({});
    latest = null;
    redraw();
    setStatus(`session ${session} on ${SERVICE_BASE}`);
  } catch (err) {
    setStatus(`cannot reach service at ${SERVICE_BASE}: ${err}`, true);
  }
}

void start();
