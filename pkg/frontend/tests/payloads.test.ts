import { describe, expect, it } from "vitest";

import type { SessionView, SubmitResponse } from "../src/api.js";
import { loadFixture } from "./fixtures.js";

interface Payloads {
  datasets: { datasets: { dataset_id: string; categories: unknown[] }[] };
  session_initial: SessionView;
  refine_response: { mask_png_base64: string; likelihood_summary: unknown[] };
  submit_failed: SubmitResponse;
  submit_passed: SubmitResponse;
}

const payloads = loadFixture<Payloads>("session_payloads.json");

function collectKeys(value: unknown, keys: Set<string>): void {
  if (Array.isArray(value)) {
    for (const item of value) collectKeys(item, keys);
  } else if (value && typeof value === "object") {
    for (const [key, child] of Object.entries(value)) {
      keys.add(key);
      collectKeys(child, keys);
    }
  }
}

describe("captured service payloads", () => {
  it("never expose a ground-truth marker, in any key", () => {
    const keys = new Set<string>();
    collectKeys(payloads, keys);
    for (const key of keys) {
      expect(key).not.toMatch(/ground_truth|checkpoint_id|has_gt|gt_/);
      expect(key).not.toBe("gt");
    }
  });

  it("session views have the fields the UI renders", () => {
    const session = payloads.session_initial;
    expect(session.images).toHaveLength(3);
    for (const image of session.images) {
      expect(typeof image.image_id).toBe("string");
      expect(image.width).toBeGreaterThan(0);
      expect(image.height).toBeGreaterThan(0);
      expect(typeof image.refined).toBe("boolean");
      expect(image.object_count).toBeGreaterThanOrEqual(1);
    }
  });

  it("failed submit re-issues the identical batch with traces cleared", () => {
    const before = payloads.session_initial.images.map((i) => i.image_id);
    const after = payloads.submit_failed.session;
    expect(payloads.submit_failed.passed).toBe(false);
    expect(after.images.map((i) => i.image_id)).toEqual(before);
    for (const image of after.images) {
      expect(image.labeled_pixels).toBe(0);
      expect(image.stroke_count).toBe(0);
      expect(image.refined).toBe(false);
    }
    expect(after.attempt).toBe(payloads.session_initial.attempt + 1);
  });

  it("scores come without image ids and with a clamped bonus", () => {
    for (const response of [payloads.submit_failed, payloads.submit_passed]) {
      for (const score of response.scores) {
        expect(Object.keys(score).sort()).toEqual([
          "base_score",
          "bonus",
          "expected_time",
          "final_score",
        ]);
        expect(score.bonus).toBeGreaterThanOrEqual(1);
        expect(score.bonus).toBeLessThanOrEqual(2);
      }
    }
  });

  it("refine responses carry a decodable PNG payload", () => {
    const b64 = payloads.refine_response.mask_png_base64;
    const bytes = Buffer.from(b64, "base64");
    // PNG signature
    expect(Array.from(bytes.slice(0, 4))).toEqual([0x89, 0x50, 0x4e, 0x47]);
    expect(payloads.refine_response.likelihood_summary.length).toBeGreaterThan(0);
  });
});
