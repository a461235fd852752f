// DOM wiring for the studio. All state lives in StudioController; this file
// only paints it and forwards user gestures.

import { EngineClient } from "./api.js";
import { StudioController, type StudioState } from "./controller.js";
import { decodeWav } from "./wavdecode.js";
import { computePeaks, peaksToPath } from "./waveform.js";
import { formatGain, timeAtPixel } from "./timeline.js";

const client = new EngineClient("");
const controller = new StudioController(client);

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const laneLabels: Record<string, string> = { speech: "Speech", sfx: "SFX", bgm: "BGM" };

function renderTimeline(state: StudioState): void {
  const host = $("timeline");
  host.innerHTML = "";
  const view = state.timeline;
  if (!view) return;

  for (const lane of view.lanes) {
    const row = document.createElement("div");
    row.className = "lane";
    const label = document.createElement("div");
    label.className = "lane-label";
    label.textContent = laneLabels[lane.kind] ?? lane.kind;
    const strip = document.createElement("div");
    strip.className = "lane-strip";
    strip.style.width = `${view.widthPx}px`;

    for (const block of lane.blocks) {
      const el = document.createElement("div");
      el.className = `block block-${block.kind}`;
      el.style.left = `${block.leftPx}px`;
      el.style.width = `${block.widthPx}px`;
      el.dataset.entryId = block.entryId;
      el.title = block.label;
      const badges = [formatGain(block.gainDb)];
      if (block.score !== null) badges.push(`score ${block.score.toFixed(2)}`);
      if (block.attempts !== null && block.attempts > 1) badges.push(`${block.attempts}x`);
      el.innerHTML = `<span class="block-label">${block.label}</span>` +
        `<span class="block-badges">${badges.join(" | ")}</span>`;
      strip.appendChild(el);
    }

    if (state.cursorTime !== null) {
      const cursor = document.createElement("div");
      cursor.className = "cursor";
      cursor.style.left = `${state.cursorTime * view.pxPerSecond}px`;
      strip.appendChild(cursor);
    }

    strip.addEventListener("click", (ev) => {
      const rect = strip.getBoundingClientRect();
      controller.setCursor(timeAtPixel(view, ev.clientX - rect.left + strip.scrollLeft));
    });

    row.append(label, strip);
    host.appendChild(row);
  }
}

async function renderWaveform(state: StudioState): Promise<void> {
  const svg = $("waveform");
  if (!state.projectId || !state.script) return;
  try {
    const bytes = await client.getRenderBytes(state.projectId, state.script.version);
    const { samples } = decodeWav(bytes);
    const peaks = computePeaks(samples, 200);
    svg.innerHTML = `<path d="${peaksToPath(peaks, 800, 80)}" stroke="#4a9" fill="none"/>`;
  } catch {
    svg.innerHTML = "";
  }
}

function paint(state: StudioState): void {
  $("version-badge").textContent = state.timeline ? `v${state.timeline.version}` : "-";
  $("stage").textContent = state.summary?.stage ?? "";
  ($("feedback-text") as HTMLInputElement).disabled = state.busy;
  ($("feedback-send") as HTMLButtonElement).disabled = state.busy;
  $("cursor-readout").textContent =
    state.cursorTime !== null ? `cursor ${state.cursorTime.toFixed(2)}s` : "no cursor";
  $("notices").innerHTML = state.notices.map((n) => `<li>${n}</li>`).join("");
  $("error").textContent = state.error ?? "";

  const audio = $("player") as HTMLAudioElement;
  if (state.renderUrl && audio.dataset.src !== state.renderUrl) {
    audio.src = state.renderUrl;
    audio.dataset.src = state.renderUrl;
  }
  renderTimeline(state);
  void renderWaveform(state);
}

async function boot(): Promise<void> {
  controller.onChange(paint);

  const projects = await client.listProjects();
  const picker = $("project-picker") as HTMLSelectElement;
  picker.innerHTML = projects
    .map((p) => `<option value="${p.project_id}">${p.project_id}: ${p.prompt}</option>`)
    .join("");
  picker.addEventListener("change", () => void controller.loadProject(picker.value));

  $("feedback-send").addEventListener("click", () => {
    const input = $("feedback-text") as HTMLInputElement;
    if (!input.value.trim()) return;
    void controller.submitFeedback(input.value.trim()).then(() => {
      input.value = "";
    }).catch(() => { /* controller already surfaced the notice */ });
  });

  $("new-project").addEventListener("click", () => {
    const prompt = window.prompt("Story prompt:");
    if (!prompt) return;
    void client.createProject(prompt).then((summary) => {
      void boot().then(() => controller.loadProject(summary.project_id));
    });
  });

  if (projects.length) {
    await controller.loadProject(projects[0].project_id);
  }
}

void boot();
