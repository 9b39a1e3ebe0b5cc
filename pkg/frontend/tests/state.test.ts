import { describe, expect, it } from "vitest";

import type { SessionView, SubmitResponse } from "../src/api.js";
import { CanvasStore, WorkflowStore } from "../src/state.js";
import { loadFixture } from "./fixtures.js";

interface Payloads {
  session_initial: SessionView;
  submit_failed: SubmitResponse;
  submit_passed: SubmitResponse;
}

const payloads = loadFixture<Payloads>("session_payloads.json");

describe("canvas store settings", () => {
  it("accepts only the four thicknesses", () => {
    const store = new CanvasStore(() => 0);
    store.setThickness(4);
    expect(store.thickness).toBe(4);
    store.setThickness(3);
    expect(store.thickness).toBe(4);
  });

  it("clamps opacities to [0, 1]", () => {
    const store = new CanvasStore(() => 0);
    store.setImageOpacity(1.4);
    store.setMaskOpacity(-0.2);
    expect(store.imageOpacity).toBe(1);
    expect(store.maskOpacity).toBe(0);
  });

  it("toggles trace and mask layers", () => {
    const store = new CanvasStore(() => 0);
    store.toggleMask();
    store.toggleTrace();
    expect(store.maskVisible).toBe(false);
    expect(store.traceVisible).toBe(false);
  });
});

describe("pointer protocol", () => {
  it("press-drag-release with pencil yields one stroke with >= 2 points", () => {
    const store = new CanvasStore(() => 0);
    store.pointerDown(1, 1);
    store.pointerMove(2, 1);
    store.pointerMove(3, 2);
    const stroke = store.pointerUp(4, 2);
    expect(stroke).not.toBeNull();
    expect(stroke!.points.length).toBeGreaterThanOrEqual(2);
    expect(store.strokes).toHaveLength(1);
  });

  it("click-release on the same point with the line tool is rejected", () => {
    const store = new CanvasStore(() => 0);
    store.setTool("line");
    store.pointerDown(5, 5);
    const stroke = store.pointerUp(5.4, 5.2); // same image pixel
    expect(stroke).toBeNull();
    expect(store.strokes).toHaveLength(0);
  });

  it("line keeps only press and release points", () => {
    const store = new CanvasStore(() => 0);
    store.setTool("line");
    store.pointerDown(0, 0);
    store.pointerMove(3, 7);
    store.pointerMove(9, 2);
    const stroke = store.pointerUp(10, 10);
    expect(stroke!.points).toEqual([
      [0, 0],
      [10, 10],
    ]);
  });

  it("starts the timer at the first finalized stroke", () => {
    let now = 5_000;
    const store = new CanvasStore(() => now);
    expect(store.elapsedSeconds()).toBe(0);
    store.pointerDown(0, 0);
    store.pointerUp(2, 0);
    now = 8_000;
    expect(store.elapsedSeconds()).toBe(3);
    store.pointerDown(0, 1);
    store.pointerUp(2, 1);
    expect(store.elapsedSeconds()).toBe(3); // second stroke does not restart it
  });
});

describe("batch workflow", () => {
  it("failed submit re-issues the same image ids with cleared local strokes", () => {
    const workflow = new WorkflowStore(() => 0);
    workflow.applySession(payloads.session_initial);
    const ids = workflow.batchImageIds();
    for (const id of ids) {
      const canvas = workflow.canvasFor(id);
      canvas.pointerDown(1, 1);
      canvas.pointerUp(3, 3);
      expect(canvas.strokes.length).toBe(1);
    }
    workflow.applySubmit(payloads.submit_failed);
    expect(workflow.screen).toBe("redo");
    expect(workflow.batchImageIds()).toEqual(ids);
    for (const id of ids) {
      expect(workflow.canvasFor(id).strokes).toHaveLength(0);
    }
  });

  it("passed submit shows the score screen with bonus <= 2", () => {
    const workflow = new WorkflowStore(() => 0);
    workflow.applySession(payloads.session_initial);
    workflow.applySubmit(payloads.submit_passed);
    expect(workflow.screen).toBe("score");
    expect(workflow.lastScores.length).toBeGreaterThan(0);
    for (const score of workflow.lastScores) {
      expect(score.bonus).toBeLessThanOrEqual(2);
      expect(score.bonus).toBeGreaterThanOrEqual(1);
      expect(score.final_score).toBeGreaterThanOrEqual(0);
    }
  });

  it("allows only one in-flight refine request", () => {
    const workflow = new WorkflowStore(() => 0);
    expect(workflow.beginRefine()).toBe(true);
    expect(workflow.beginRefine()).toBe(false);
    workflow.endRefine();
    expect(workflow.beginRefine()).toBe(true);
  });

  it("lists unfinished images before submit", () => {
    const workflow = new WorkflowStore(() => 0);
    workflow.applySession(payloads.session_initial);
    const unfinished = workflow.unfinishedImageIds();
    expect(unfinished).toEqual(workflow.batchImageIds());
  });
});
