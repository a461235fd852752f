// Pure timeline layout: script document -> lanes of positioned blocks.
// Block positions are proportional to start_time/duration; the DOM layer
// only paints what this module computes, so layout is unit-testable.

import type { LoopOutcomeDoc, ScriptDoc, TrackEntryDoc, TrackKind } from "./types.js";

export const LANE_ORDER: TrackKind[] = ["speech", "sfx", "bgm"];

export interface TimelineBlock {
  entryId: string;
  kind: TrackKind;
  label: string;
  leftPx: number;
  widthPx: number;
  gainDb: number;
  score: number | null; // retained attempt's score, when a loop record exists
  attempts: number | null;
  startTime: number;
  duration: number;
}

export interface TimelineLane {
  kind: TrackKind;
  blocks: TimelineBlock[];
}

export interface TimelineView {
  version: number;
  masterDuration: number;
  pxPerSecond: number;
  widthPx: number;
  lanes: TimelineLane[];
}

function labelFor(entry: TrackEntryDoc, script: ScriptDoc): string {
  if (entry.kind === "speech" && entry.line_id) {
    const line = script.dialogue.lines.find((l) => l.line_id === entry.line_id);
    if (line) {
      const speaker = script.dialogue.profiles.find((p) => p.id === line.speaker_id);
      const name = speaker ? speaker.name : line.speaker_id;
      return `${name}: ${line.text}`;
    }
  }
  return entry.description ?? entry.entry_id;
}

export function loopKeyFor(entry: TrackEntryDoc): string[] {
  // Attempt documents are keyed speech_<line>_vNNNN / ns_<entry>_vNNNN.
  if (entry.kind === "speech" && entry.line_id) return [`speech_${entry.line_id}`];
  return [`ns_${entry.entry_id}`];
}

function latestOutcome(
  prefixes: string[],
  attempts: Record<string, LoopOutcomeDoc>,
): LoopOutcomeDoc | null {
  let best: { version: number; doc: LoopOutcomeDoc } | null = null;
  for (const [key, doc] of Object.entries(attempts)) {
    const m = key.match(/^(.*)_v(\d+)$/);
    if (!m) continue;
    if (!prefixes.includes(m[1])) continue;
    const version = parseInt(m[2], 10);
    if (!best || version > best.version) best = { version, doc };
  }
  return best ? best.doc : null;
}

export function buildTimeline(
  script: ScriptDoc,
  attempts: Record<string, LoopOutcomeDoc> = {},
  pxPerSecond = 60,
): TimelineView {
  const lanes: TimelineLane[] = LANE_ORDER.map((kind) => ({ kind, blocks: [] }));
  for (const entry of script.tracks) {
    const lane = lanes.find((l) => l.kind === entry.kind);
    if (!lane) continue;
    const outcome = latestOutcome(loopKeyFor(entry), attempts);
    const retained =
      outcome && outcome.attempts.length >= outcome.retained
        ? outcome.attempts[outcome.retained - 1]
        : null;
    lane.blocks.push({
      entryId: entry.entry_id,
      kind: entry.kind,
      label: labelFor(entry, script),
      leftPx: entry.start_time * pxPerSecond,
      widthPx: Math.max(entry.duration * pxPerSecond, 2),
      gainDb: entry.gain_db,
      score: retained ? retained.score : null,
      attempts: outcome ? outcome.attempts.length : null,
      startTime: entry.start_time,
      duration: entry.duration,
    });
  }
  for (const lane of lanes) {
    lane.blocks.sort((a, b) => a.startTime - b.startTime || (a.entryId < b.entryId ? -1 : 1));
  }
  return {
    version: script.version,
    masterDuration: script.master_duration,
    pxPerSecond,
    widthPx: script.master_duration * pxPerSecond,
    lanes,
  };
}

export function timeAtPixel(view: TimelineView, px: number): number {
  const t = px / view.pxPerSecond;
  return Math.min(Math.max(t, 0), view.masterDuration);
}

export function formatGain(gainDb: number): string {
  if (gainDb === 0) return "0 dB";
  return `${gainDb > 0 ? "+" : ""}${gainDb.toFixed(1).replace(/\.0$/, "")} dB`;
}
