// Canvas drawing: houses as squares, towns as circles, focus rings, and
// expression-coded referent fills. Pure presentation; all decisions arrive
// precomputed in the highlight map.

import type { SceneDoc } from './types.js';
import type { HighlightMap } from './state.js';
import { sceneToCanvas, Viewport } from './viewport.js';

const GLYPH = 9;
const EXPRESSION_COLORS = ['#e4572e', '#17bebb', '#ffc914', '#76b041', '#b07bac'];

export function expressionColor(index: number): string {
  return EXPRESSION_COLORS[(index - 1) % EXPRESSION_COLORS.length];
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  scene: SceneDoc,
  vp: Viewport,
  highlights: HighlightMap,
): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.font = '11px sans-serif';
  ctx.textAlign = 'center';

  // towns first so stacked house icons stay visible on top
  const ordered = [...scene.objects].sort((a, b) =>
    a.type === b.type ? 0 : a.type === 'town' ? -1 : 1,
  );
  for (const obj of ordered) {
    if (!obj.visible) {
      continue;
    }
    const [x, y] = sceneToCanvas(vp, obj.position);
    const highlight = highlights.get(obj.id);

    ctx.beginPath();
    if (obj.type === 'town') {
      ctx.arc(x, y, GLYPH + 3, 0, 2 * Math.PI);
      ctx.fillStyle = highlight?.role === 'referent'
        ? expressionColor(highlight.expressions[0])
        : '#c8d6c1';
    } else {
      ctx.rect(x - GLYPH, y - GLYPH, 2 * GLYPH, 2 * GLYPH);
      ctx.fillStyle = highlight?.role === 'referent'
        ? expressionColor(highlight.expressions[0])
        : '#d9d4cf';
    }
    ctx.fill();
    ctx.strokeStyle = '#4a4a4a';
    ctx.stroke();

    if (highlight?.role === 'focus') {
      ctx.beginPath();
      ctx.arc(x, y, GLYPH + 7, 0, 2 * Math.PI);
      ctx.strokeStyle = '#2667ff';
      ctx.lineWidth = 2;
      ctx.stroke();
      ctx.lineWidth = 1;
    }
    ctx.fillStyle = '#222';
    ctx.fillText(obj.id, x, y + GLYPH + 14);
  }
}

export function drawPendingGesture(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  at: [number, number],
  radiusSceneUnits: number,
): void {
  const [x, y] = sceneToCanvas(vp, at);
  ctx.beginPath();
  ctx.setLineDash([4, 3]);
  ctx.strokeStyle = '#e4572e';
  if (radiusSceneUnits > 0) {
    ctx.arc(x, y, radiusSceneUnits * vp.scale, 0, 2 * Math.PI);
  } else {
    ctx.arc(x, y, 6, 0, 2 * Math.PI);
  }
  ctx.stroke();
  ctx.setLineDash([]);
}
