// Mirrors the engine's script document (docs/script-format.md) and API bodies.

export type TrackKind = "speech" | "sfx" | "bgm";

export interface TrackEntryDoc {
  entry_id: string;
  kind: TrackKind;
  start_time: number;
  duration: number;
  description: string | null;
  line_id: string | null;
  gain_db: number;
  asset_ref: string | null;
}

export interface DialogueLineDoc {
  line_id: string;
  speaker_id: string;
  text: string;
  scene_context: string;
  emotion: number[];
}

export interface ProfileDoc {
  id: string;
  name: string;
  gender: string;
  age_band: string;
  timbre_notes: string;
  delivery_style: string;
}

export interface ScriptDoc {
  schema_version: number;
  version: number;
  sample_rate_hz: number;
  master_duration: number;
  dialogue: { profiles: ProfileDoc[]; lines: DialogueLineDoc[] };
  tracks: TrackEntryDoc[];
}

export interface ProjectSummary {
  project_id: string;
  prompt: string;
  stage: string;
  current_version: number;
  script_versions: number[];
  last_event_seq: number;
}

export interface LoopAttemptDoc {
  attempt_index: number;
  request: Record<string, unknown>;
  asset_id: string;
  score: number;
  critique: string;
  seed: number | null;
}

export interface LoopOutcomeDoc {
  attempts: LoopAttemptDoc[];
  retained: number;
  stop_reason: string;
}

export interface FeedbackResponse {
  no_parse: boolean;
  unparsed: { text: string; reason: string }[];
  rejected: { target: string; reason: string }[];
  version: number;
  applied?: { category: string; target: string; payload: Record<string, unknown> }[];
  regenerated?: string[];
  render_url?: string;
}

export interface EngineEvent {
  seq: number;
  type: string;
  [key: string]: unknown;
}
