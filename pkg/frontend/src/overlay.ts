/**
 * Overlay rendering: trace and mask layers as RGBA buffers.
 *
 * Traces show every labeled pixel, with the background category drawn
 * black. Masks hide the background (and void) entirely, so the image
 * stays visible underneath; other categories get their palette color at
 * the chosen opacity.
 */

import type { Palette, Rgb } from "./palette.js";
import { BACKGROUND_COLOR, VOID_COLOR } from "./palette.js";
import { UNLABELED } from "./rasterize.js";

function sameColor(r: number, g: number, b: number, rgb: Rgb): boolean {
  return r === rgb[0] && g === rgb[1] && b === rgb[2];
}

/** Trace raster (category indices) to RGBA; unlabeled pixels transparent. */
export function traceToRgba(
  raster: Uint8Array,
  palette: Palette,
  opacity: number,
): Uint8ClampedArray {
  const out = new Uint8ClampedArray(raster.length * 4);
  const alpha = Math.round(opacity * 255);
  for (let i = 0; i < raster.length; i++) {
    const value = raster[i];
    if (value === UNLABELED) continue;
    const [r, g, b] = palette.colorOf(value);
    out[i * 4] = r;
    out[i * 4 + 1] = g;
    out[i * 4 + 2] = b;
    out[i * 4 + 3] = alpha;
  }
  return out;
}

/** Mask indices to RGBA; background and void transparent. */
export function maskToRgba(
  mask: Uint8Array,
  palette: Palette,
  opacity: number,
): Uint8ClampedArray {
  const out = new Uint8ClampedArray(mask.length * 4);
  const alpha = Math.round(opacity * 255);
  for (let i = 0; i < mask.length; i++) {
    const value = mask[i];
    if (value === 0 || value === UNLABELED) continue;
    const [r, g, b] = palette.colorOf(value);
    out[i * 4] = r;
    out[i * 4 + 1] = g;
    out[i * 4 + 2] = b;
    out[i * 4 + 3] = alpha;
  }
  return out;
}

/**
 * Post-process a browser-decoded mask PNG (RGBA with palette colors):
 * make background/void pixels transparent and apply the mask opacity.
 * Equivalent to maskToRgba for masks that came back from the server.
 */
export function applyMaskOpacity(
  rgba: Uint8ClampedArray,
  opacity: number,
): Uint8ClampedArray {
  const out = new Uint8ClampedArray(rgba);
  const alpha = Math.round(opacity * 255);
  for (let i = 0; i < out.length; i += 4) {
    const r = out[i];
    const g = out[i + 1];
    const b = out[i + 2];
    if (sameColor(r, g, b, BACKGROUND_COLOR) || sameColor(r, g, b, VOID_COLOR)) {
      out[i] = 0;
      out[i + 1] = 0;
      out[i + 2] = 0;
      out[i + 3] = 0;
    } else {
      out[i + 3] = alpha;
    }
  }
  return out;
}
