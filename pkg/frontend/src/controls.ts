import type { ApiClient } from "./api.js";
import type { ControlRequest, Snapshot } from "./types.js";

/** Leading-edge debounce: the first call fires immediately, repeats within
 *  waitMs are dropped. Guarantees one request per user click. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
  now: () => number = Date.now,
): (...args: A) => void {
  let last = -Infinity;
  return (...args: A) => {
    const t = now();
    if (t - last < waitMs) return;
    last = t;
    fn(...args);
  };
}

export interface ControlDeps {
  api: ApiClient;
  sessionId: string;
  /** Reconciles UI + audio with the authoritative post-command snapshot. */
  applySnapshot(snap: Snapshot): void;
  /** Optional immediate UI hint before the response lands. */
  optimistic?(request: ControlRequest): void;
  onError?(err: unknown): void;
}

export interface Controls {
  next(): void;
  prev(): void;
  selectTrack(trackId: string): void;
  selectPlaylist(mood: string): void;
  setPlaying(playing: boolean): void;
  trackEnded(): void;
}

/** Wire the manual controls: every interaction posts exactly one control
 *  command (debounced), optimistically updates, then reconciles on response
 *  (and again on the next pushed event). */
export function makeControls(
  deps: ControlDeps,
  debounceMs = 250,
  now: () => number = Date.now,
): Controls {
  const send = (request: ControlRequest) => {
    deps.optimistic?.(request);
    deps.api
      .control(deps.sessionId, request)
      .then((snap) => deps.applySnapshot(snap))
      .catch((err) => deps.onError?.(err));
  };
  const debounced = (make: (...args: string[]) => ControlRequest) =>
    debounce((...args: string[]) => send(make(...args)), debounceMs, now);

  return {
    next: debounced(() => ({ command: "next" })),
    prev: debounced(() => ({ command: "prev" })),
    selectTrack: debounced((trackId) => ({ command: "select_track", track_id: trackId })),
    selectPlaylist: debounced((mood) => ({ command: "select_playlist", mood })),
    setPlaying: (playing: boolean) => send({ command: "set_playing", playing }),
    // machine-generated on audio end; never user-spammed, so not debounced
    trackEnded: () => send({ command: "track_ended" }),
  };
}

/** Dropdown values carry their kind: whole playlists vs single tracks. */
export function dropdownRequest(value: string): ControlRequest | null {
  if (value.startsWith("mood:")) {
    return { command: "select_playlist", mood: value.slice("mood:".length) };
  }
  if (value.startsWith("track:")) {
    return { command: "select_track", track_id: value.slice("track:".length) };
  }
  return null;
}
