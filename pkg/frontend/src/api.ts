// Typed client for the engine HTTP API. The UI never mutates scripts
// locally: every state change round-trips through these endpoints.

import type {
  EngineEvent,
  FeedbackResponse,
  LoopOutcomeDoc,
  ProjectSummary,
  ScriptDoc,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class EngineError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class EngineClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        detail = body.detail ?? detail;
      } catch {
        /* non-JSON error body */
      }
      throw new EngineError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  listProjects(): Promise<ProjectSummary[]> {
    return this.request("/api/projects");
  }

  createProject(prompt: string, projectId?: string): Promise<ProjectSummary> {
    return this.request("/api/projects", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ prompt, project_id: projectId ?? null }),
    });
  }

  getProject(projectId: string): Promise<ProjectSummary> {
    return this.request(`/api/projects/${projectId}`);
  }

  getScript(projectId: string, version?: number): Promise<ScriptDoc> {
    const suffix = version ? `?version=${version}` : "";
    return this.request(`/api/projects/${projectId}/script${suffix}`);
  }

  getAttempts(projectId: string): Promise<Record<string, LoopOutcomeDoc>> {
    return this.request(`/api/projects/${projectId}/attempts`);
  }

  async getRenderBytes(projectId: string, version?: number): Promise<ArrayBuffer> {
    const suffix = version ? `?version=${version}` : "";
    const resp = await this.fetchImpl(
      `${this.baseUrl}/api/projects/${projectId}/render${suffix}`,
    );
    if (!resp.ok) throw new EngineError(resp.status, "render unavailable");
    return resp.arrayBuffer();
  }

  renderUrl(projectId: string, version?: number): string {
    const suffix = version ? `?version=${version}` : "";
    return `${this.baseUrl}/api/projects/${projectId}/render${suffix}`;
  }

  submitFeedback(
    projectId: string,
    text: string,
    cursorTime: number | null,
    expectedVersion?: number,
  ): Promise<FeedbackResponse> {
    return this.request(`/api/projects/${projectId}/feedback`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        text,
        cursor_time: cursorTime,
        expected_version: expectedVersion ?? null,
      }),
    });
  }

  pollEvents(
    projectId: string,
    after: number,
    waitSeconds = 0,
  ): Promise<{ events: EngineEvent[]; next_after: number }> {
    return this.request(
      `/api/projects/${projectId}/events?after=${after}&wait=${waitSeconds}`,
    );
  }
}
