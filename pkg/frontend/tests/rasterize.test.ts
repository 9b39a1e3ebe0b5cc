import { describe, expect, it } from "vitest";

import { rasterFromStrokes, UNLABELED } from "../src/rasterize.js";
import type { Stroke, Tool } from "../src/rasterize.js";
import { CanvasStore } from "../src/state.js";
import { loadFixture } from "./fixtures.js";
import type { GoldenSequence } from "./fixtures.js";

const goldens = loadFixture<GoldenSequence[]>("stroke_goldens.json");

function replaySequence(seq: GoldenSequence): Stroke[] {
  const store = new CanvasStore(() => 0);
  store.view = { zoom: seq.zoom, panX: 0, panY: 0 };
  for (const step of seq.steps) {
    if (step.set) {
      if (step.set.tool) store.setTool(step.set.tool as Tool);
      if (step.set.category !== undefined) store.setCategory(step.set.category);
      if (step.set.thickness !== undefined) store.setThickness(step.set.thickness);
    } else if (step.down) {
      store.pointerDown(step.down[0], step.down[1]);
    } else if (step.move) {
      store.pointerMove(step.move[0], step.move[1]);
    } else if (step.up) {
      store.pointerUp(step.up[0], step.up[1]);
    }
  }
  return store.strokes;
}

describe("golden stroke sequences", () => {
  for (const seq of goldens) {
    it(`${seq.name}: pointer script reproduces the golden strokes and raster`, () => {
      const strokes = replaySequence(seq);
      expect(
        strokes.map((s) => ({
          tool: s.tool,
          category: s.category,
          thickness: s.thickness,
          points: s.points.map(([x, y]) => [x, y]),
        })),
      ).toEqual(seq.expected_strokes);

      const raster = rasterFromStrokes(seq.width, seq.height, strokes);
      expect(Array.from(raster)).toEqual(seq.raster);
    });
  }
});

describe("rasterization rule", () => {
  it("draws an axis-aligned 1px line exactly", () => {
    const stroke: Stroke = {
      tool: "line",
      category: 5,
      thickness: 1,
      points: [
        [0, 0],
        [3, 0],
      ],
    };
    const raster = rasterFromStrokes(4, 4, [stroke]);
    expect(Array.from(raster.slice(0, 4))).toEqual([5, 5, 5, 5]);
    expect(Array.from(raster.slice(4)).every((v) => v === UNLABELED)).toBe(true);
  });

  it("eraser restores the unlabeled value under its stamp", () => {
    const pencil: Stroke = {
      tool: "pencil",
      category: 1,
      thickness: 8,
      points: [[0, 0]],
    };
    const eraser: Stroke = {
      tool: "eraser",
      category: 0,
      thickness: 8,
      points: [[0, 0]],
    };
    const raster = rasterFromStrokes(8, 8, [pencil, eraser]);
    expect(Array.from(raster).every((v) => v === UNLABELED)).toBe(true);
  });

  it("clamps out-of-bounds points instead of rejecting them", () => {
    const stroke: Stroke = {
      tool: "line",
      category: 1,
      thickness: 1,
      points: [
        [-5, 0],
        [20, 0],
      ],
    };
    const raster = rasterFromStrokes(4, 4, [stroke]);
    expect(Array.from(raster.slice(0, 4))).toEqual([1, 1, 1, 1]);
  });

  it("later strokes overwrite earlier ones", () => {
    const a: Stroke = { tool: "pencil", category: 1, thickness: 2, points: [[2, 2]] };
    const b: Stroke = { tool: "pencil", category: 2, thickness: 2, points: [[2, 2]] };
    const raster = rasterFromStrokes(8, 8, [a, b]);
    expect(raster[2 * 8 + 2]).toBe(2);
    expect(raster[3 * 8 + 3]).toBe(2);
  });

  it("rejects invalid thickness", () => {
    const bad: Stroke = { tool: "pencil", category: 1, thickness: 3, points: [[1, 1]] };
    expect(() => rasterFromStrokes(4, 4, [bad])).toThrow(/thickness/);
  });
});
