// Scene coordinates are abstract units; the canvas transform fits the scene
// bounding box with padding and maps pointer positions back.

import type { SceneDoc } from './types.js';

export interface Viewport {
  scale: number;
  offsetX: number;
  offsetY: number;
}

const PADDING = 40;

export function fitScene(scene: SceneDoc, width: number, height: number): Viewport {
  const xs = scene.objects.map((o) => o.position[0]);
  const ys = scene.objects.map((o) => o.position[1]);
  if (xs.length === 0) {
    return { scale: 1, offsetX: 0, offsetY: 0 };
  }
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(maxX - minX, 1);
  const spanY = Math.max(maxY - minY, 1);
  const scale = Math.min((width - 2 * PADDING) / spanX, (height - 2 * PADDING) / spanY);
  return {
    scale,
    offsetX: PADDING - minX * scale,
    offsetY: PADDING - minY * scale,
  };
}

export function sceneToCanvas(vp: Viewport, p: [number, number]): [number, number] {
  return [p[0] * vp.scale + vp.offsetX, p[1] * vp.scale + vp.offsetY];
}

export function canvasToScene(vp: Viewport, p: [number, number]): [number, number] {
  return [(p[0] - vp.offsetX) / vp.scale, (p[1] - vp.offsetY) / vp.scale];
}

export function canvasLengthToScene(vp: Viewport, length: number): number {
  return length / vp.scale;
}
