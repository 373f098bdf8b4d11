/** Acceptance: the four UI behaviors the release hinges on, run against the
 *  real modules composed together over a scripted transport. */

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { CaptureLoop } from "../src/capture.js";
import { dropdownRequest, makeControls } from "../src/controls.js";
import { subscribeEvents, type EventSourceLike } from "../src/events.js";
import { NowPlaying } from "../src/player.js";
import { renderSnapshot, type SnapshotSlots } from "../src/view.js";
import type { ControlRequest, Snapshot } from "../src/types.js";
import { jsonResponse, makeFakeAudio, makeSnapshot } from "./helpers.js";

interface ScriptedBackend {
  api: ApiClient;
  frames: { imageB64: string; atMs: number }[];
  controls: ControlRequest[];
  sessions: number;
}

function scriptedBackend(): ScriptedBackend {
  const backend: ScriptedBackend = {
    frames: [],
    controls: [],
    sessions: 0,
    api: undefined as unknown as ApiClient,
  };
  backend.api = new ApiClient("", async (url, init) => {
    if (url === "/api/sessions") {
      backend.sessions += 1;
      return jsonResponse({ session_id: `session-${backend.sessions}` });
    }
    if (url.endsWith("/frames")) {
      const body = JSON.parse(String(init?.body)) as { image_b64: string; captured_at_ms: number };
      backend.frames.push({ imageB64: body.image_b64, atMs: body.captured_at_ms });
      return jsonResponse(makeSnapshot({ seq: backend.frames.length }));
    }
    if (url.endsWith("/control")) {
      const request = JSON.parse(String(init?.body)) as ControlRequest;
      backend.controls.push(request);
      return jsonResponse(
        makeSnapshot({
          mood: request.mood ?? "sad",
          playlist_id: request.mood ?? "sad",
          track: { track_id: `${request.mood ?? "sad"}/t0.mp3`, title: "t0" },
          playing: true,
          override_active: true,
          seq: 100 + backend.controls.length,
        }),
      );
    }
    throw new Error(`unscripted url ${url}`);
  });
  return backend;
}

function makeSlots() {
  const overrides: boolean[] = [];
  const slots: SnapshotSlots = {
    detected: { textContent: null },
    smoothed: { textContent: null },
    mood: { textContent: null },
    trackTitle: { textContent: null },
    playlist: { textContent: null },
    setOverride: (active) => overrides.push(active),
    setPlaying: () => {},
    setDropdownValue: () => {},
  };
  return { slots, overrides };
}

describe("acceptance", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("establishes one session and posts frames at the 3000 ms cadence", async () => {
    const backend = scriptedBackend();
    const sessionId = await backend.api.createSession();
    expect(backend.sessions).toBe(1);

    const loop = new CaptureLoop(
      {
        grabFrame: async () => "ZnJhbWU=",
        postFrame: (b64, at) => backend.api.postFrame(sessionId, b64, at),
      },
      3000,
    );
    loop.start();
    await vi.advanceTimersByTimeAsync(30_000);
    loop.stop();

    expect(backend.frames.length).toBe(10);
    const times = backend.frames.map((f) => f.atMs);
    for (let i = 1; i < times.length; i++) {
      expect(Math.abs(times[i] - times[i - 1] - 3000)).toBeLessThanOrEqual(200);
    }
    console.log("ACCEPTANCE ui_capture_cadence: PASS");
  });

  it("renders the mood pushed by the event stream within 500 ms", async () => {
    let source!: { push(doc: unknown): void } & EventSourceLike;
    const { slots } = makeSlots();
    const rendered: number[] = [];
    subscribeEvents(
      "/api/sessions/session-1/events",
      (snap) => {
        renderSnapshot(slots, snap);
        rendered.push(Date.now());
      },
      () => {
        const listeners: ((ev: { data: string }) => void)[] = [];
        const fake = {
          addEventListener(_type: "message", listener: (ev: { data: string }) => void) {
            listeners.push(listener);
          },
          close() {},
          push(doc: unknown) {
            for (const listener of listeners) listener({ data: JSON.stringify(doc) });
          },
        };
        source = fake;
        return fake;
      },
    );

    const pushedAt = Date.now();
    source.push(makeSnapshot({ seq: 1, mood: "happy", smoothed_emotion: "happy" }));
    await vi.advanceTimersByTimeAsync(500);

    expect(slots.mood.textContent).toBe("happy");
    expect(rendered.length).toBe(1);
    expect(rendered[0] - pushedAt).toBeLessThanOrEqual(500);
    console.log("ACCEPTANCE ui_event_render_latency: PASS");
  });

  it("dropdown selection round-trips to an override-active state", async () => {
    const backend = scriptedBackend();
    const sessionId = await backend.api.createSession();
    const { slots, overrides } = makeSlots();
    const audio = makeFakeAudio();
    const player = new NowPlaying(audio, (id) => `/api/audio/${id}`, () => {});
    const controls = makeControls({
      api: backend.api,
      sessionId,
      applySnapshot: (snap: Snapshot) => {
        renderSnapshot(slots, snap);
        player.applySnapshot(snap);
      },
    });

    const request = dropdownRequest("mood:angry");
    expect(request).toEqual({ command: "select_playlist", mood: "angry" });
    controls.selectPlaylist(request!.mood!);
    await vi.advanceTimersByTimeAsync(10);

    expect(backend.controls).toEqual([{ command: "select_playlist", mood: "angry" }]);
    expect(overrides.at(-1)).toBe(true);
    expect(slots.playlist.textContent).toBe("angry");
    expect(audio.src).toBe("/api/audio/angry/t0.mp3");
    console.log("ACCEPTANCE ui_override_round_trip: PASS");
  });

  it("reports track completion so the backend loops the playlist", async () => {
    const backend = scriptedBackend();
    const sessionId = await backend.api.createSession();
    const audio = makeFakeAudio();
    const controls = makeControls({
      api: backend.api,
      sessionId,
      applySnapshot: () => {},
    });
    new NowPlaying(audio, (id) => `/api/audio/${id}`, () => controls.trackEnded());

    audio.emitEnded();
    await vi.advanceTimersByTimeAsync(10);
    expect(backend.controls).toEqual([{ command: "track_ended" }]);
    console.log("ACCEPTANCE ui_track_ended_loop: PASS");
  });
});
