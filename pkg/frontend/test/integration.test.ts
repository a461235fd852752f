// UI round-trip against the real engine (mock-backed backends): create a
// fixture project over HTTP, load it into the view-model, submit
// "insert a scream here" at a cursor, and watch the new SFX block plus the
// incremented version badge arrive within one progress cycle.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { EngineClient } from "../src/api.js";
import { StudioController } from "../src/controller.js";

const PORT = 18750 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;

let engine: ChildProcess | null = null;

async function waitForEngine(timeoutMs = 60_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/api/projects`);
      if (resp.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("engine did not come up in time");
}

beforeAll(async () => {
  const root = mkdtempSync(join(tmpdir(), "studio-int-"));
  engine = spawn(
    "python3",
    ["-m", "storymix.pipeline.cli", "serve", "--project-root", root,
     "--bind", `127.0.0.1:${PORT}`],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  engine.on("exit", (code) => {
    if (code && code !== 0) console.error(`engine exited with ${code}`);
  });
  await waitForEngine();
}, 90_000);

afterAll(() => {
  engine?.kill("SIGTERM");
});

describe("studio against the live engine", () => {
  it("insert-at-cursor round trip updates blocks and version badge", async () => {
    const client = new EngineClient(BASE);
    const summary = await client.createProject(
      "A detective reveals the truth while rain lashes the windows.",
    );
    expect(summary.stage).toBe("rendered");

    const controller = new StudioController(client);
    const view = await controller.loadProject(summary.project_id);
    expect(controller.versionBadge).toBe(1);
    const sfxBefore = view.lanes.find((l) => l.kind === "sfx")!.blocks.length;
    const blockCount = view.lanes.reduce((n, l) => n + l.blocks.length, 0);
    expect(blockCount).toBeGreaterThan(0);

    controller.setCursor(3.0);
    const response = await controller.submitFeedback("insert a scream here");
    expect(response.no_parse).toBe(false);
    expect(response.regenerated).toHaveLength(1);

    // One progress cycle later the controller has reloaded: badge bumped,
    // new SFX block sits at the cursor time.
    expect(controller.versionBadge).toBe(2);
    const sfxLane = controller.state.timeline!.lanes.find((l) => l.kind === "sfx")!;
    expect(sfxLane.blocks.length).toBe(sfxBefore + 1);
    const added = sfxLane.blocks.find((b) => b.entryId === response.regenerated![0])!;
    expect(added.startTime).toBeCloseTo(3.0, 3);
    expect(added.label).toContain("scream");

    // The loop audit for the new entry is visible to the UI.
    expect(added.attempts).not.toBeNull();
    expect(added.score).not.toBeNull();

    // The render endpoint serves a decodable master for the new version.
    const bytes = await client.getRenderBytes(summary.project_id, 2);
    const { decodeWav } = await import("../src/wavdecode.js");
    const { samples, sampleRate } = decodeWav(bytes);
    expect(sampleRate).toBe(48000);
    expect(samples.length).toBeGreaterThan(0);
  }, 120_000);

  it("gain-only feedback keeps all blocks and changes only the badge", async () => {
    const client = new EngineClient(BASE);
    const summary = await client.createProject("A quiet tale of two travelers.");
    const controller = new StudioController(client);
    await controller.loadProject(summary.project_id);
    const before = controller.state.timeline!;

    const response = await controller.submitFeedback("lower the background music volume");
    expect(response.no_parse).toBe(false);
    expect(response.regenerated).toEqual([]);
    const after = controller.state.timeline!;
    expect(after.version).toBe(before.version + 1);
    const beforeCount = before.lanes.reduce((n, l) => n + l.blocks.length, 0);
    const afterCount = after.lanes.reduce((n, l) => n + l.blocks.length, 0);
    expect(afterCount).toBe(beforeCount);
    const bgm = after.lanes.find((l) => l.kind === "bgm")!.blocks[0];
    const bgmBefore = before.lanes.find((l) => l.kind === "bgm")!.blocks[0];
    expect(bgm.gainDb).toBeCloseTo(bgmBefore.gainDb - 6);
  }, 120_000);
});
