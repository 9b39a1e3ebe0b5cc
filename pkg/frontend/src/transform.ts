/** Canvas <-> image coordinate mapping under zoom and pan. */

export interface ViewTransform {
  zoom: number;
  panX: number;
  panY: number;
}

export const MIN_ZOOM = 0.25;
export const MAX_ZOOM = 16;

export function identityTransform(): ViewTransform {
  return { zoom: 1, panX: 0, panY: 0 };
}

/** Canvas pixel to image pixel (integer, floor). */
export function canvasToImage(
  cx: number,
  cy: number,
  t: ViewTransform,
): { x: number; y: number } {
  return {
    x: Math.floor((cx - t.panX) / t.zoom),
    y: Math.floor((cy - t.panY) / t.zoom),
  };
}

/** Top-left canvas position of an image pixel. */
export function imageToCanvas(
  x: number,
  y: number,
  t: ViewTransform,
): { cx: number; cy: number } {
  return { cx: x * t.zoom + t.panX, cy: y * t.zoom + t.panY };
}

export function zoomBy(
  t: ViewTransform,
  factor: number,
  pivotCx: number,
  pivotCy: number,
): ViewTransform {
  const zoom = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, t.zoom * factor));
  if (zoom === t.zoom) return t;
  // keep the image point under the pivot fixed
  const scale = zoom / t.zoom;
  return {
    zoom,
    panX: pivotCx - (pivotCx - t.panX) * scale,
    panY: pivotCy - (pivotCy - t.panY) * scale,
  };
}
