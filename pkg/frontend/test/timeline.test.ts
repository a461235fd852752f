import { describe, expect, it } from "vitest";

import { buildTimeline, formatGain, timeAtPixel } from "../src/timeline.js";
import { fixtureAttempts, fixtureScript } from "./fixtures.js";

describe("buildTimeline", () => {
  it("places blocks into kind lanes with proportional positions", () => {
    const view = buildTimeline(fixtureScript(), {}, 60);
    expect(view.lanes.map((l) => l.kind)).toEqual(["speech", "sfx", "bgm"]);
    const speech = view.lanes[0];
    expect(speech.blocks).toHaveLength(2);
    expect(speech.blocks[0].leftPx).toBe(0);
    expect(speech.blocks[0].widthPx).toBe(120); // 2.0 s at 60 px/s
    expect(speech.blocks[1].leftPx).toBe(150); // 2.5 s at 60 px/s
    expect(view.widthPx).toBe(600);
    expect(view.version).toBe(1);
  });

  it("labels speech blocks with speaker and line text", () => {
    const view = buildTimeline(fixtureScript());
    expect(view.lanes[0].blocks[0].label).toBe("Narrator: It began at midnight.");
    expect(view.lanes[1].blocks[0].label).toBe("rain on glass");
  });

  it("attaches retained score and attempt count from loop records", () => {
    const view = buildTimeline(fixtureScript(), fixtureAttempts());
    const sp1 = view.lanes[0].blocks[0];
    expect(sp1.score).toBeCloseTo(0.81);
    expect(sp1.attempts).toBe(2);
    const fx = view.lanes[1].blocks[0];
    expect(fx.score).toBeCloseTo(0.9);
    const sp2 = view.lanes[0].blocks[1];
    expect(sp2.score).toBeNull(); // no loop record for L2 in the fixture
  });

  it("prefers the newest loop record when several versions exist", () => {
    const attempts = fixtureAttempts();
    attempts["ns_fx001_v0003"] = {
      attempts: [{ attempt_index: 1, request: {}, asset_id: "sha256:d", score: 0.4,
                   critique: "", seed: 18 }],
      retained: 1,
      stop_reason: "budget_exhausted",
    };
    const view = buildTimeline(fixtureScript(), attempts);
    expect(view.lanes[1].blocks[0].score).toBeCloseTo(0.4);
  });

  it("orders blocks within a lane by start time", () => {
    const script = fixtureScript();
    script.tracks.reverse();
    const view = buildTimeline(script);
    const starts = view.lanes[0].blocks.map((b) => b.startTime);
    expect(starts).toEqual([...starts].sort((a, b) => a - b));
  });
});

describe("timeAtPixel", () => {
  it("converts pixel offsets back to clamped times", () => {
    const view = buildTimeline(fixtureScript(), {}, 60);
    expect(timeAtPixel(view, 300)).toBeCloseTo(5.0);
    expect(timeAtPixel(view, -10)).toBe(0);
    expect(timeAtPixel(view, 1e6)).toBe(10.0);
  });
});

describe("formatGain", () => {
  it("renders signed decibel badges", () => {
    expect(formatGain(0)).toBe("0 dB");
    expect(formatGain(-6)).toBe("-6 dB");
    expect(formatGain(2.5)).toBe("+2.5 dB");
  });
});
