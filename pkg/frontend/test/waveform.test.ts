import { describe, expect, it } from "vitest";

import { computePeaks, peaksToPath } from "../src/waveform.js";

describe("computePeaks", () => {
  it("produces one max-abs peak per bin", () => {
    const samples = new Float32Array([0.1, -0.9, 0.2, 0.3, -0.1, 0.5, 0.0, -0.4]);
    const peaks = computePeaks(samples, 4);
    expect(peaks).toEqual([0.9, 0.3, 0.5, 0.4].map(Math.fround));
  });

  it("handles more bins than samples without gaps", () => {
    const samples = new Float32Array([0.5, -1.0]);
    const peaks = computePeaks(samples, 8);
    expect(peaks).toHaveLength(8);
    expect(Math.max(...peaks)).toBe(1.0);
    expect(peaks.every((p) => p >= 0)).toBe(true);
  });

  it("returns zeros for empty input", () => {
    expect(computePeaks(new Float32Array(0), 3)).toEqual([0, 0, 0]);
  });

  it("default thumbnail resolution is stable at 200 bins", () => {
    const samples = new Float32Array(48000).map((_, i) => Math.sin(i / 50));
    const peaks = computePeaks(samples, 200);
    expect(peaks).toHaveLength(200);
    expect(Math.max(...peaks)).toBeCloseTo(1.0, 2);
  });
});

describe("peaksToPath", () => {
  it("emits one vertical tick per peak", () => {
    const path = peaksToPath([0.5, 1.0], 100, 80);
    const ticks = path.split("M").filter(Boolean);
    expect(ticks).toHaveLength(2);
    expect(path).toContain("M0.00 20.00L0.00 60.00"); // 0.5 * mid around mid=40
  });

  it("empty peaks give an empty path", () => {
    expect(peaksToPath([], 100, 80)).toBe("");
  });
});
