// Progress event subscription: SSE with long-poll fallback and reconnect.

import type { EngineClient } from "./api.js";
import type { EngineEvent } from "./types.js";

export type EventHandler = (event: EngineEvent) => void;

export interface Subscription {
  close(): void;
}

export function subscribeSSE(
  baseUrl: string,
  projectId: string,
  after: number,
  onEvent: EventHandler,
  reconnectMs = 1500,
): Subscription {
  let source: EventSource | null = null;
  let cursor = after;
  let closed = false;

  const connect = () => {
    if (closed) return;
    source = new EventSource(
      `${baseUrl}/api/projects/${projectId}/events/stream?after=${cursor}`,
    );
    source.onmessage = (msg) => {
      const event = JSON.parse(msg.data) as EngineEvent;
      cursor = event.seq;
      onEvent(event);
    };
    source.onerror = () => {
      source?.close();
      setTimeout(connect, reconnectMs);
    };
  };
  connect();
  return {
    close() {
      closed = true;
      source?.close();
    },
  };
}

// Long-poll until `predicate` sees a matching event (or the poll budget runs
// out). Returns all events observed. Used for "wait for this round's cycle".
export async function pollUntil(
  client: EngineClient,
  projectId: string,
  after: number,
  predicate: (event: EngineEvent) => boolean,
  maxPolls = 10,
  waitSeconds = 2,
): Promise<{ events: EngineEvent[]; matched: boolean; cursor: number }> {
  const seen: EngineEvent[] = [];
  let cursor = after;
  for (let i = 0; i < maxPolls; i++) {
    const batch = await client.pollEvents(projectId, cursor, waitSeconds);
    for (const event of batch.events) {
      seen.push(event);
      if (predicate(event)) {
        return { events: seen, matched: true, cursor: event.seq };
      }
    }
    cursor = batch.next_after;
    if (batch.events.length === 0 && waitSeconds === 0) break;
  }
  return { events: seen, matched: false, cursor };
}
