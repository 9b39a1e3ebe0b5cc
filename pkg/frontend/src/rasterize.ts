/**
 * Client-side stroke rasterization.
 *
 * Mirrors the server rule exactly: Bresenham walks between consecutive
 * points, each visited pixel dilated by a thickness x thickness square
 * stamp anchored at its top-left corner; the eraser writes the
 * unlabeled value 255; later strokes overwrite earlier ones. Keeping
 * the rule identical means the on-canvas preview is bit-equal to what
 * the service rasterizes from the uploaded stroke list.
 */

export type Tool = "pencil" | "line" | "eraser";

export interface Stroke {
  tool: Tool;
  category: number;
  thickness: number;
  points: [number, number][];
}

export const UNLABELED = 255;
export const THICKNESSES = [1, 2, 4, 8] as const;

export function isValidThickness(t: number): boolean {
  return (THICKNESSES as readonly number[]).includes(t);
}

function clamp(value: number, high: number): number {
  return Math.min(Math.max(value, 0), high);
}

export function bresenham(
  x0: number,
  y0: number,
  x1: number,
  y1: number,
): [number, number][] {
  const points: [number, number][] = [];
  const dx = Math.abs(x1 - x0);
  const dy = -Math.abs(y1 - y0);
  const sx = x0 < x1 ? 1 : -1;
  const sy = y0 < y1 ? 1 : -1;
  let err = dx + dy;
  let x = x0;
  let y = y0;
  for (;;) {
    points.push([x, y]);
    if (x === x1 && y === y1) break;
    const e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
  return points;
}

export function validateStroke(stroke: Stroke): void {
  if (!isValidThickness(stroke.thickness)) {
    throw new Error(`invalid thickness ${stroke.thickness}`);
  }
  if (stroke.tool === "line") {
    if (stroke.points.length !== 2) {
      throw new Error("line stroke needs exactly 2 points");
    }
  } else if (stroke.points.length < 1) {
    throw new Error(`${stroke.tool} stroke needs at least 1 point`);
  }
}

export function applyStroke(
  raster: Uint8Array,
  width: number,
  height: number,
  stroke: Stroke,
): void {
  validateStroke(stroke);
  const value = stroke.tool === "eraser" ? UNLABELED : stroke.category;
  const pts = stroke.points.map(
    ([x, y]) => [clamp(x, width - 1), clamp(y, height - 1)] as [number, number],
  );
  if (pts.length === 1) pts.push(pts[0]);
  const t = stroke.thickness;
  for (let i = 0; i + 1 < pts.length; i++) {
    for (const [px, py] of bresenham(pts[i][0], pts[i][1], pts[i + 1][0], pts[i + 1][1])) {
      const yEnd = Math.min(py + t, height);
      const xEnd = Math.min(px + t, width);
      for (let y = py; y < yEnd; y++) {
        raster.fill(value, y * width + px, y * width + xEnd);
      }
    }
  }
}

export function rasterFromStrokes(
  width: number,
  height: number,
  strokes: Stroke[],
): Uint8Array {
  const raster = new Uint8Array(width * height).fill(UNLABELED);
  for (const stroke of strokes) {
    applyStroke(raster, width, height, stroke);
  }
  return raster;
}
