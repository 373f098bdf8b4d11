import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { jsonResponse, makeSnapshot } from "./helpers.js";

interface Recorded {
  url: string;
  method?: string;
  body?: string;
}

function recordingClient(respond: (req: Recorded) => Response) {
  const requests: Recorded[] = [];
  const api = new ApiClient("", async (url, init) => {
    const req = { url, method: init?.method, body: init?.body as string | undefined };
    requests.push(req);
    return respond(req);
  });
  return { api, requests };
}

describe("ApiClient", () => {
  it("creates sessions", async () => {
    const { api, requests } = recordingClient(() => jsonResponse({ session_id: "abc" }));
    expect(await api.createSession()).toBe("abc");
    expect(requests[0]).toMatchObject({ url: "/api/sessions", method: "POST" });
  });

  it("posts frames with the wire field names", async () => {
    const { api, requests } = recordingClient(() => jsonResponse(makeSnapshot()));
    await api.postFrame("s1", "aGVsbG8=", 12_345);
    expect(requests[0].url).toBe("/api/sessions/s1/frames");
    expect(JSON.parse(requests[0].body!)).toEqual({
      image_b64: "aGVsbG8=",
      captured_at_ms: 12_345,
    });
  });

  it("unwraps the playlists document", async () => {
    const { api } = recordingClient(() =>
      jsonResponse({
        playlists: [{ playlist_id: "sad", mood: "sad", track_count: 1, tracks: [] }],
      }),
    );
    const playlists = await api.playlists();
    expect(playlists.length).toBe(1);
    expect(playlists[0].mood).toBe("sad");
  });

  it("encodes audio url segments but keeps the slashes", () => {
    const api = new ApiClient();
    expect(api.audioUrl("sad songs/blü e.mp3")).toBe(
      "/api/audio/sad%20songs/bl%C3%BC%20e.mp3",
    );
  });

  it("throws ApiError with the backend detail on failure", async () => {
    const { api } = recordingClient(() => jsonResponse({ detail: "unknown session s9" }, 404));
    await expect(api.state("s9")).rejects.toThrowError(ApiError);
    await expect(api.state("s9")).rejects.toThrowError(/unknown session s9/);
  });

  it("falls back to the default capture interval when the root is unreachable", async () => {
    const failing = new ApiClient("", async () => {
      throw new Error("connection refused");
    });
    expect(await failing.captureIntervalMs()).toBe(3000);
    const { api } = recordingClient(() => jsonResponse({ capture_interval_ms: 5000 }));
    expect(await api.captureIntervalMs()).toBe(5000);
  });
});
