import type { Snapshot } from "./types.js";

/** Minimal slice of EventSource the subscription needs; injectable in tests. */
export interface EventSourceLike {
  addEventListener(type: "message", listener: (ev: { data: string }) => void): void;
  close(): void;
}

export type EventSourceFactory = (url: string) => EventSourceLike;

const defaultFactory: EventSourceFactory = (url) => new EventSource(url);

/** Subscribe to the server-push snapshot stream.
 *
 *  Delivery is at-least-once with per-connection increasing sequence numbers,
 *  so stale or duplicate snapshots (seq <= the last seen) are dropped here.
 *  Malformed frames are ignored; transport errors are left to EventSource's
 *  own reconnect (the backend replays the current snapshot on reconnect).
 *  Returns an unsubscribe function.
 */
export function subscribeEvents(
  url: string,
  onSnapshot: (snap: Snapshot) => void,
  factory: EventSourceFactory = defaultFactory,
): () => void {
  const source = factory(url);
  let lastSeq = -1;
  source.addEventListener("message", (ev) => {
    let snap: Snapshot;
    try {
      snap = JSON.parse(ev.data) as Snapshot;
    } catch {
      return;
    }
    if (typeof snap.seq !== "number" || snap.seq <= lastSeq) return;
    lastSeq = snap.seq;
    onSnapshot(snap);
  });
  return () => source.close();
}
