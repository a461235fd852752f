import type { LoopOutcomeDoc, ScriptDoc } from "../src/types.js";

export function fixtureScript(): ScriptDoc {
  return {
    schema_version: 1,
    version: 1,
    sample_rate_hz: 48000,
    master_duration: 10.0,
    dialogue: {
      profiles: [
        { id: "narrator", name: "Narrator", gender: "female", age_band: "adult",
          timbre_notes: "warm", delivery_style: "measured" },
      ],
      lines: [
        { line_id: "L1", speaker_id: "narrator", text: "It began at midnight.",
          scene_context: "opening", emotion: [0, 0, 0.2, 0, 0, 0, 0.8] },
        { line_id: "L2", speaker_id: "narrator", text: "No one heard the door.",
          scene_context: "opening", emotion: [0, 0, 0, 0, 0, 0, 1] },
      ],
    },
    tracks: [
      { entry_id: "sp001", kind: "speech", start_time: 0.0, duration: 2.0,
        description: null, line_id: "L1", gain_db: 0, asset_ref: null },
      { entry_id: "sp002", kind: "speech", start_time: 2.5, duration: 1.5,
        description: null, line_id: "L2", gain_db: 0, asset_ref: null },
      { entry_id: "fx001", kind: "sfx", start_time: 1.0, duration: 2.0,
        description: "rain on glass", line_id: null, gain_db: -8, asset_ref: null },
      { entry_id: "bg001", kind: "bgm", start_time: 0.0, duration: 9.0,
        description: "uneasy strings", line_id: null, gain_db: -4, asset_ref: null },
    ],
  };
}

export function fixtureAttempts(): Record<string, LoopOutcomeDoc> {
  return {
    speech_L1_v0001: {
      attempts: [
        { attempt_index: 1, request: {}, asset_id: "sha256:a", score: 0.55,
          critique: "flat", seed: null },
        { attempt_index: 2, request: {}, asset_id: "sha256:b", score: 0.81,
          critique: "better", seed: null },
      ],
      retained: 2,
      stop_reason: "threshold_met",
    },
    ns_fx001_v0001: {
      attempts: [
        { attempt_index: 1, request: {}, asset_id: "sha256:c", score: 0.9,
          critique: "good", seed: 17 },
      ],
      retained: 1,
      stop_reason: "threshold_met",
    },
  };
}
