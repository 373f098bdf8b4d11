import type { Snapshot } from "./types.js";

/** Slice of HTMLAudioElement the controller drives; injectable in tests. */
export interface AudioLike {
  src: string;
  volume: number;
  play(): Promise<void> | void;
  pause(): void;
  addEventListener(type: "ended", listener: () => void): void;
}

/** Keeps the audio element in lockstep with backend snapshots.
 *
 *  The source switches only when the backend says the track changed; play and
 *  pause follow the snapshot's playing flag. Track completion is reported
 *  upward (the backend owns the loop advance).
 */
export class NowPlaying {
  private currentTrackId: string | null = null;

  constructor(
    private readonly audio: AudioLike,
    private readonly audioUrlFor: (trackId: string) => string,
    onTrackEnded: () => void,
  ) {
    this.audio.addEventListener("ended", onTrackEnded);
  }

  applySnapshot(snap: Snapshot): void {
    if (snap.track.track_id !== this.currentTrackId) {
      this.currentTrackId = snap.track.track_id;
      this.audio.src = this.audioUrlFor(snap.track.track_id);
    }
    if (snap.playing) {
      const playing = this.audio.play();
      if (playing && typeof (playing as Promise<void>).catch === "function") {
        (playing as Promise<void>).catch(() => {
          // Autoplay may be blocked until the user interacts; the next
          // manual control or snapshot will retry.
        });
      }
    } else {
      this.audio.pause();
    }
  }

  setVolume(volume: number): void {
    this.audio.volume = Math.min(1, Math.max(0, volume));
  }
}
