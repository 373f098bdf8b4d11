import { describe, expect, it } from "vitest";

import { dropdownEntries, renderSnapshot, type SnapshotSlots } from "../src/view.js";
import type { PlaylistSummary } from "../src/types.js";
import { makeSnapshot } from "./helpers.js";

function makeSlots() {
  const calls: Record<string, unknown[]> = { override: [], playing: [], dropdown: [] };
  const slots: SnapshotSlots = {
    detected: { textContent: null },
    smoothed: { textContent: null },
    mood: { textContent: null },
    trackTitle: { textContent: null },
    playlist: { textContent: null },
    setOverride: (active) => calls.override.push(active),
    setPlaying: (playing) => calls.playing.push(playing),
    setDropdownValue: (value) => calls.dropdown.push(value),
  };
  return { slots, calls };
}

describe("renderSnapshot", () => {
  it("writes every backend-derived field", () => {
    const { slots, calls } = makeSlots();
    renderSnapshot(
      slots,
      makeSnapshot({
        detected_emotion: "sad",
        smoothed_emotion: "sad",
        mood: "sad",
        playlist_id: "sad",
        track: { track_id: "sad/blue1.mp3", title: "blue1" },
        playing: true,
        override_active: true,
      }),
    );
    expect(slots.detected.textContent).toBe("sad");
    expect(slots.smoothed.textContent).toBe("sad");
    expect(slots.mood.textContent).toBe("sad");
    expect(slots.trackTitle.textContent).toBe("blue1");
    expect(slots.playlist.textContent).toBe("sad");
    expect(calls.override).toEqual([true]);
    expect(calls.playing).toEqual([true]);
    expect(calls.dropdown).toEqual(["track:sad/blue1.mp3"]);
  });

  it("renders placeholders before any detection", () => {
    const { slots } = makeSlots();
    renderSnapshot(slots, makeSnapshot());
    expect(slots.detected.textContent).toBe("—");
    expect(slots.mood.textContent).toBe("—");
  });
});

describe("dropdownEntries", () => {
  const playlists: PlaylistSummary[] = [
    {
      playlist_id: "happy",
      mood: "happy",
      track_count: 2,
      tracks: [
        { track_id: "happy/a.mp3", title: "a", duration_s: null },
        { track_id: "happy/b.mp3", title: "b", duration_s: 4 },
      ],
    },
    {
      playlist_id: "sad",
      mood: "sad",
      track_count: 1,
      tracks: [{ track_id: "sad/c.mp3", title: "c", duration_s: null }],
    },
  ];

  it("lists a shuffle entry per playlist followed by its tracks", () => {
    const entries = dropdownEntries(playlists);
    expect(entries.map((e) => e.value)).toEqual([
      "mood:happy",
      "track:happy/a.mp3",
      "track:happy/b.mp3",
      "mood:sad",
      "track:sad/c.mp3",
    ]);
    expect(entries[0].group).toBe("happy (2)");
    expect(entries[3].label).toBe("shuffle sad");
  });
});
