// Controller flow against an in-process fake of the engine API. The fake
// mirrors the documented endpoint semantics (version bump, events,
// 409 on stale expected_version) without any audio work.

import { describe, expect, it } from "vitest";

import { EngineClient } from "../src/api.js";
import { StudioController } from "../src/controller.js";
import type { EngineEvent, ScriptDoc } from "../src/types.js";
import { fixtureAttempts, fixtureScript } from "./fixtures.js";

class FakeEngine {
  script: ScriptDoc = fixtureScript();
  attempts = fixtureAttempts();
  events: EngineEvent[] = [{ seq: 1, type: "stage", stage: "rendered" }];
  scriptsByVersion: Record<number, ScriptDoc> = { 1: fixtureScript() };

  fetch = async (url: string, init?: RequestInit): Promise<Response> => {
    const json = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      });
    const u = new URL(url, "http://fake");
    const path = u.pathname;

    if (path === "/api/projects/p1" && !init?.method) {
      return json({
        project_id: "p1", prompt: "x", stage: "rendered",
        current_version: this.script.version,
        script_versions: Object.keys(this.scriptsByVersion).map(Number),
        last_event_seq: this.events.at(-1)?.seq ?? 0,
      });
    }
    if (path === "/api/projects/p1/script") {
      const v = u.searchParams.get("version");
      const doc = v ? this.scriptsByVersion[Number(v)] : this.script;
      return doc ? json(doc) : json({ detail: "no such version" }, 404);
    }
    if (path === "/api/projects/p1/attempts") return json(this.attempts);
    if (path === "/api/projects/p1/events") {
      const after = Number(u.searchParams.get("after") ?? 0);
      const events = this.events.filter((e) => e.seq > after);
      return json({ events, next_after: events.at(-1)?.seq ?? after });
    }
    if (path === "/api/projects/p1/feedback" && init?.method === "POST") {
      const body = JSON.parse(String(init.body));
      if (body.expected_version !== null && body.expected_version !== this.script.version) {
        return json({ detail: "stale version" }, 409);
      }
      if (body.text.startsWith("frobnicate")) {
        return json({
          no_parse: true, version: this.script.version,
          unparsed: [{ text: body.text, reason: "no grammar rule matched" }],
          rejected: [],
        });
      }
      // applies an insert at the cursor, like the real engine would
      const version = this.script.version + 1;
      const inserted = {
        entry_id: "fx002", kind: "sfx" as const,
        start_time: body.cursor_time ?? 0, duration: 2.0,
        description: "scream", line_id: null, gain_db: 0, asset_ref: null,
      };
      this.script = {
        ...this.script,
        version,
        tracks: [...this.script.tracks, inserted],
      };
      this.scriptsByVersion[version] = this.script;
      const seq = (this.events.at(-1)?.seq ?? 0) + 1;
      this.events.push({ seq, type: "render_done", version });
      return json({
        no_parse: false, version, unparsed: [], rejected: [],
        applied: [{ category: "structural_editing", target: "all entries", payload: {} }],
        regenerated: ["fx002"],
        render_url: `/api/projects/p1/render?version=${version}`,
      });
    }
    return json({ detail: `unhandled ${path}` }, 500);
  };
}

function makeController() {
  const engine = new FakeEngine();
  const client = new EngineClient("http://fake", engine.fetch);
  return { engine, controller: new StudioController(client) };
}

describe("StudioController", () => {
  it("loadProject builds a timeline and sets the version badge", async () => {
    const { controller } = makeController();
    const view = await controller.loadProject("p1");
    expect(view.lanes[0].blocks).toHaveLength(2);
    expect(controller.versionBadge).toBe(1);
    expect(controller.state.renderUrl).toContain("version=1");
  });

  it("submitFeedback inserts at the cursor and bumps the badge", async () => {
    const { controller } = makeController();
    await controller.loadProject("p1");
    controller.setCursor(4.2);
    const response = await controller.submitFeedback("insert a scream here");
    expect(response.no_parse).toBe(false);
    expect(controller.versionBadge).toBe(2);
    const sfxLane = controller.state.timeline!.lanes[1];
    const added = sfxLane.blocks.find((b) => b.entryId === "fx002");
    expect(added).toBeDefined();
    expect(added!.startTime).toBeCloseTo(4.2);
  });

  it("disables the feedback box while a round is in flight", async () => {
    const { controller } = makeController();
    await controller.loadProject("p1");
    const busyStates: boolean[] = [];
    controller.onChange((s) => busyStates.push(s.busy));
    await controller.submitFeedback("insert a scream at 1s");
    expect(busyStates[0]).toBe(true); // flipped on immediately
    expect(busyStates.at(-1)).toBe(false); // released at the end
    expect(controller.state.busy).toBe(false);
  });

  it("surfaces no-parse as a notice without touching the timeline", async () => {
    const { controller } = makeController();
    await controller.loadProject("p1");
    const before = controller.state.timeline;
    const response = await controller.submitFeedback("frobnicate the timeline");
    expect(response.no_parse).toBe(true);
    expect(controller.state.notices[0]).toContain("no grammar rule matched");
    expect(controller.versionBadge).toBe(1);
    expect(controller.state.timeline).toBe(before);
  });

  it("auto-refreshes on a stale-version conflict", async () => {
    const { engine, controller } = makeController();
    await controller.loadProject("p1");
    // Someone else edits: server moves to v2 behind our back.
    engine.script = { ...engine.script, version: 2 };
    engine.scriptsByVersion[2] = engine.script;
    await expect(controller.submitFeedback("insert a scream at 1s")).rejects.toThrow();
    expect(controller.state.staleVersion).toBe(true);
    expect(controller.versionBadge).toBe(2); // reloaded to the server's truth
    expect(controller.state.notices.some((n) => n.includes("resubmit"))).toBe(true);
  });

  it("historical versions stay reachable after edits", async () => {
    const { engine, controller } = makeController();
    await controller.loadProject("p1");
    await controller.submitFeedback("insert a scream at 1s");
    const client = new EngineClient("http://fake", engine.fetch);
    const v1 = await client.getScript("p1", 1);
    expect(v1.version).toBe(1);
    expect(v1.tracks).toHaveLength(4);
  });
});
