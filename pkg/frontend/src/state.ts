/**
 * UI state: drawing tool settings, the pointer-to-stroke protocol, and
 * the batch workflow.
 *
 * Pointer events arrive in canvas coordinates and are mapped through
 * the view transform to image pixels. A pencil/eraser drag records the
 * visited pixel path (consecutive duplicates skipped); a line records
 * only its press and release points and is rejected as degenerate when
 * they coincide. The per-image timer starts at the first finalized
 * stroke.
 */

import type { SessionView, SubmitResponse } from "./api.js";
import type { Stroke, Tool } from "./rasterize.js";
import { isValidThickness } from "./rasterize.js";
import type { ViewTransform } from "./transform.js";
import { canvasToImage, identityTransform, zoomBy } from "./transform.js";

export interface PendingStroke {
  tool: Tool;
  category: number;
  thickness: number;
  points: [number, number][];
}

function clamp01(value: number): number {
  return Math.min(1, Math.max(0, value));
}

export class CanvasStore {
  tool: Tool = "pencil";
  category = 1;
  thickness = 2;
  imageOpacity = 1;
  maskOpacity = 0.6;
  traceVisible = true;
  maskVisible = true;
  view: ViewTransform = identityTransform();
  strokes: Stroke[] = [];
  pending: PendingStroke | null = null;
  timerStartedAt: number | null = null;

  constructor(private readonly now: () => number = () => Date.now()) {}

  setTool(tool: Tool): void {
    this.tool = tool;
  }

  setCategory(category: number): void {
    if (category >= 0 && category <= 254) this.category = category;
  }

  setThickness(thickness: number): void {
    if (isValidThickness(thickness)) this.thickness = thickness;
  }

  setImageOpacity(value: number): void {
    this.imageOpacity = clamp01(value);
  }

  setMaskOpacity(value: number): void {
    this.maskOpacity = clamp01(value);
  }

  toggleTrace(): void {
    this.traceVisible = !this.traceVisible;
  }

  toggleMask(): void {
    this.maskVisible = !this.maskVisible;
  }

  zoomAt(factor: number, pivotCx: number, pivotCy: number): void {
    this.view = zoomBy(this.view, factor, pivotCx, pivotCy);
  }

  /** Pointer press on the canvas: begins a stroke. */
  pointerDown(cx: number, cy: number): void {
    const p = canvasToImage(cx, cy, this.view);
    this.pending = {
      tool: this.tool,
      category: this.category,
      thickness: this.thickness,
      points: [[p.x, p.y]],
    };
  }

  /** Pointer drag: extends the path (pencil/eraser) or the line preview. */
  pointerMove(cx: number, cy: number): void {
    if (!this.pending) return;
    const p = canvasToImage(cx, cy, this.view);
    const pts = this.pending.points;
    if (this.pending.tool === "line") {
      if (pts.length === 1) pts.push([p.x, p.y]);
      else pts[1] = [p.x, p.y];
      return;
    }
    const [lx, ly] = pts[pts.length - 1];
    if (p.x !== lx || p.y !== ly) pts.push([p.x, p.y]);
  }

  /**
   * Pointer release: finalizes the stroke, or null when rejected
   * (a line whose endpoints coincide is degenerate).
   */
  pointerUp(cx: number, cy: number): Stroke | null {
    if (!this.pending) return null;
    this.pointerMove(cx, cy);
    const pending = this.pending;
    this.pending = null;
    let points = pending.points;
    if (pending.tool === "line") {
      const end = points.length > 1 ? points[1] : points[0];
      if (end[0] === points[0][0] && end[1] === points[0][1]) return null;
      points = [points[0], end];
    }
    const stroke: Stroke = {
      tool: pending.tool,
      category: pending.category,
      thickness: pending.thickness,
      points,
    };
    this.strokes.push(stroke);
    if (this.timerStartedAt === null) this.timerStartedAt = this.now();
    return stroke;
  }

  elapsedSeconds(): number {
    if (this.timerStartedAt === null) return 0;
    return (this.now() - this.timerStartedAt) / 1000;
  }

  clearStrokes(): void {
    this.strokes = [];
    this.pending = null;
  }
}

export type WorkflowScreen = "annotate" | "score" | "redo";

/** One annotator's progress through the current batch. */
export class WorkflowStore {
  session: SessionView | null = null;
  activeImageId: string | null = null;
  perImage = new Map<string, CanvasStore>();
  lastMaskRgba = new Map<string, Uint8ClampedArray>();
  refinePending = false;
  screen: WorkflowScreen = "annotate";
  lastScores: SubmitResponse["scores"] = [];

  constructor(private readonly now: () => number = () => Date.now()) {}

  canvasFor(imageId: string): CanvasStore {
    let store = this.perImage.get(imageId);
    if (!store) {
      store = new CanvasStore(this.now);
      this.perImage.set(imageId, store);
    }
    return store;
  }

  batchImageIds(): string[] {
    return this.session ? this.session.images.map((i) => i.image_id) : [];
  }

  /**
   * Adopt a server session view. A re-issued (failed) batch keeps the
   * same image ids but arrives with cleared traces; local stroke
   * buffers and overlays are cleared to match.
   */
  applySession(view: SessionView): void {
    const sameBatch =
      this.session !== null &&
      this.session.session_id === view.session_id &&
      this.session.attempt === view.attempt;
    this.session = view;
    if (!sameBatch) {
      for (const image of view.images) {
        if (image.labeled_pixels === 0) {
          this.perImage.get(image.image_id)?.clearStrokes();
          this.lastMaskRgba.delete(image.image_id);
        }
      }
    }
    if (!this.activeImageId || !this.batchImageIds().includes(this.activeImageId)) {
      this.activeImageId = this.batchImageIds()[0] ?? null;
    }
  }

  unfinishedImageIds(): string[] {
    if (!this.session) return [];
    return this.session.images
      .filter((image) => {
        const local = this.perImage.get(image.image_id);
        const dirty = local ? local.strokes.length > 0 : false;
        return !image.refined || dirty;
      })
      .map((image) => image.image_id);
  }

  beginRefine(): boolean {
    if (this.refinePending) return false;
    this.refinePending = true;
    return true;
  }

  endRefine(): void {
    this.refinePending = false;
  }

  applySubmit(result: SubmitResponse): void {
    this.lastScores = result.scores;
    this.applySession(result.session);
    this.screen = result.passed ? "score" : "redo";
  }
}
