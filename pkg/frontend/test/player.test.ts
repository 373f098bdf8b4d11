import { describe, expect, it } from "vitest";

import { NowPlaying } from "../src/player.js";
import { makeFakeAudio, makeSnapshot } from "./helpers.js";

const urlFor = (trackId: string) => `/api/audio/${trackId}`;

describe("NowPlaying", () => {
  it("switches the source and plays when the backend says so", () => {
    const audio = makeFakeAudio();
    const player = new NowPlaying(audio, urlFor, () => {});
    player.applySnapshot(
      makeSnapshot({
        playing: true,
        playlist_id: "sad",
        track: { track_id: "sad/blue1.mp3", title: "blue1" },
      }),
    );
    expect(audio.src).toBe("/api/audio/sad/blue1.mp3");
    expect(audio.played).toEqual(["/api/audio/sad/blue1.mp3"]);
  });

  it("does not reset the source when the track is unchanged", () => {
    const audio = makeFakeAudio();
    const player = new NowPlaying(audio, urlFor, () => {});
    const snap = makeSnapshot({ playing: true });
    player.applySnapshot(snap);
    audio.src = "mutated-by-test";
    player.applySnapshot({ ...snap, seq: snap.seq + 1 });
    expect(audio.src).toBe("mutated-by-test"); // same track: src untouched
  });

  it("pauses when the snapshot is not playing", () => {
    const audio = makeFakeAudio();
    const player = new NowPlaying(audio, urlFor, () => {});
    player.applySnapshot(makeSnapshot({ playing: false }));
    expect(audio.paused).toBe(1);
    expect(audio.played).toEqual([]);
  });

  it("reports track completion upward", () => {
    const audio = makeFakeAudio();
    let ended = 0;
    new NowPlaying(audio, urlFor, () => {
      ended += 1;
    });
    audio.emitEnded();
    expect(ended).toBe(1);
  });

  it("clamps volume into [0, 1]", () => {
    const audio = makeFakeAudio();
    const player = new NowPlaying(audio, urlFor, () => {});
    player.setVolume(1.4);
    expect(audio.volume).toBe(1);
    player.setVolume(-2);
    expect(audio.volume).toBe(0);
    player.setVolume(0.35);
    expect(audio.volume).toBe(0.35);
  });

  it("survives autoplay rejection", () => {
    const audio = makeFakeAudio();
    audio.play = async () => {
      throw new Error("NotAllowedError: user gesture required");
    };
    const player = new NowPlaying(audio, urlFor, () => {});
    expect(() => player.applySnapshot(makeSnapshot({ playing: true }))).not.toThrow();
  });
});
