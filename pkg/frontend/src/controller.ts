// Studio view-model: everything app.ts paints comes out of this class,
// and every state change round-trips through the engine API. One feedback
// round may be in flight at a time (mirrors the engine's per-project FIFO).

import { EngineClient, EngineError } from "./api.js";
import { pollUntil } from "./events.js";
import { buildTimeline, type TimelineView } from "./timeline.js";
import type { FeedbackResponse, LoopOutcomeDoc, ProjectSummary, ScriptDoc } from "./types.js";

export interface StudioState {
  projectId: string | null;
  summary: ProjectSummary | null;
  script: ScriptDoc | null;
  attempts: Record<string, LoopOutcomeDoc>;
  timeline: TimelineView | null;
  cursorTime: number | null;
  busy: boolean; // feedback in flight: the input box is disabled
  renderUrl: string | null;
  eventCursor: number;
  notices: string[];
  error: string | null;
  staleVersion: boolean; // server moved on; prompt a reload before resubmit
}

export type StateListener = (state: StudioState) => void;

const PX_PER_SECOND = 60;

export class StudioController {
  readonly state: StudioState = {
    projectId: null,
    summary: null,
    script: null,
    attempts: {},
    timeline: null,
    cursorTime: null,
    busy: false,
    renderUrl: null,
    eventCursor: 0,
    notices: [],
    error: null,
    staleVersion: false,
  };

  private listeners: StateListener[] = [];

  constructor(private client: EngineClient) {}

  onChange(listener: StateListener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const l of this.listeners) l(this.state);
  }

  async loadProject(projectId: string): Promise<TimelineView> {
    this.state.error = null;
    try {
      const [summary, script, attempts] = await Promise.all([
        this.client.getProject(projectId),
        this.client.getScript(projectId),
        this.client.getAttempts(projectId),
      ]);
      this.state.projectId = projectId;
      this.state.summary = summary;
      this.state.script = script;
      this.state.attempts = attempts;
      this.state.timeline = buildTimeline(script, attempts, PX_PER_SECOND);
      this.state.renderUrl = this.client.renderUrl(projectId, script.version);
      this.state.eventCursor = summary.last_event_seq;
      this.state.staleVersion = false;
      this.notify();
      return this.state.timeline;
    } catch (err) {
      this.state.error = err instanceof Error ? err.message : String(err);
      this.notify();
      throw err;
    }
  }

  setCursor(time: number | null): void {
    this.state.cursorTime = time;
    this.notify();
  }

  get versionBadge(): number | null {
    return this.state.timeline ? this.state.timeline.version : null;
  }

  async submitFeedback(text: string): Promise<FeedbackResponse> {
    const { projectId, script } = this.state;
    if (!projectId || !script) throw new Error("no project loaded");
    if (this.state.busy) throw new Error("a feedback round is already in flight");

    this.state.busy = true;
    this.state.notices = [];
    this.state.error = null;
    this.notify();
    try {
      const response = await this.client.submitFeedback(
        projectId,
        text,
        this.state.cursorTime,
        script.version,
      );

      for (const u of response.unparsed) {
        this.state.notices.push(`could not apply: "${u.text}" (${u.reason})`);
      }
      for (const r of response.rejected) {
        this.state.notices.push(`rejected ${r.target}: ${r.reason}`);
      }

      if (!response.no_parse) {
        // One progress cycle: wait for this round's render_done, then swap
        // in the new script, attempt records and render.
        const cycle = await pollUntil(
          this.client,
          projectId,
          this.state.eventCursor,
          (e) => e.type === "render_done" && e.version === response.version,
        );
        this.state.eventCursor = cycle.cursor;
        await this.loadProject(projectId);
      } else {
        this.notify();
      }
      return response;
    } catch (err) {
      if (err instanceof EngineError && err.status === 409) {
        // Stale version: refresh to the server's truth and ask to resubmit.
        await this.loadProject(projectId);
        this.state.staleVersion = true;
        this.state.notices.push("project changed on the server; reloaded - please resubmit");
        this.notify();
        throw err;
      }
      this.state.error = err instanceof Error ? err.message : String(err);
      this.notify();
      throw err;
    } finally {
      this.state.busy = false;
      this.notify();
    }
  }
}
