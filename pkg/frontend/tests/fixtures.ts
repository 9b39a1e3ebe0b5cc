import { readFileSync } from "node:fs";

export function loadFixture<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

export interface GoldenStep {
  set?: { tool?: string; category?: number; thickness?: number };
  down?: [number, number];
  move?: [number, number];
  up?: [number, number];
}

export interface GoldenSequence {
  name: string;
  zoom: number;
  steps: GoldenStep[];
  expected_strokes: {
    tool: string;
    category: number;
    thickness: number;
    points: [number, number][];
  }[];
  width: number;
  height: number;
  raster: number[];
}

export interface OverlayGolden {
  width: number;
  height: number;
  mask: number[];
  opacity: number;
  palette: Record<string, [number, number, number]>;
  expected_rgba: number[];
}
