import type { Snapshot } from "../src/types.js";

export function makeSnapshot(partial: Partial<Snapshot> = {}): Snapshot {
  return {
    detected_emotion: null,
    smoothed_emotion: null,
    mood: null,
    playlist_id: "calm",
    track: { track_id: "calm/still1.mp3", title: "still1" },
    track_index: 0,
    playing: false,
    override_active: false,
    strategy_in_use: "highest_percentage",
    seq: 0,
    ...partial,
  };
}

export interface FakeAudio {
  src: string;
  volume: number;
  played: string[];
  paused: number;
  play(): Promise<void>;
  pause(): void;
  addEventListener(type: "ended", listener: () => void): void;
  emitEnded(): void;
}

export function makeFakeAudio(): FakeAudio {
  const endedListeners: (() => void)[] = [];
  return {
    src: "",
    volume: 1,
    played: [],
    paused: 0,
    async play() {
      this.played.push(this.src);
    },
    pause() {
      this.paused += 1;
    },
    addEventListener(_type, listener) {
      endedListeners.push(listener);
    },
    emitEnded() {
      for (const listener of endedListeners) listener();
    },
  };
}

export function jsonResponse(doc: unknown, status = 200): Response {
  return new Response(JSON.stringify(doc), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
