import type { PlaylistSummary, Snapshot } from "./types.js";

/** Narrow write-only slots the renderer fills; real DOM nodes satisfy them. */
export interface TextSlot {
  textContent: string | null;
}

export interface SnapshotSlots {
  detected: TextSlot;
  smoothed: TextSlot;
  mood: TextSlot;
  trackTitle: TextSlot;
  playlist: TextSlot;
  setOverride(active: boolean): void;
  setPlaying(playing: boolean): void;
  setDropdownValue(value: string): void;
}

const DASH = "—";

export function renderSnapshot(slots: SnapshotSlots, snap: Snapshot): void {
  slots.detected.textContent = snap.detected_emotion ?? DASH;
  slots.smoothed.textContent = snap.smoothed_emotion ?? DASH;
  slots.mood.textContent = snap.mood ?? DASH;
  slots.trackTitle.textContent = snap.track.title;
  slots.playlist.textContent = snap.playlist_id;
  slots.setOverride(snap.override_active);
  slots.setPlaying(snap.playing);
  slots.setDropdownValue(`track:${snap.track.track_id}`);
}

export interface DropdownEntry {
  group: string;
  value: string;
  label: string;
}

/** Flatten the library summary into dropdown entries: one "whole playlist"
 *  entry per mood followed by its tracks. */
export function dropdownEntries(playlists: PlaylistSummary[]): DropdownEntry[] {
  const entries: DropdownEntry[] = [];
  for (const playlist of playlists) {
    const group = `${playlist.mood} (${playlist.track_count})`;
    entries.push({
      group,
      value: `mood:${playlist.mood}`,
      label: `shuffle ${playlist.mood}`,
    });
    for (const track of playlist.tracks) {
      entries.push({
        group,
        value: `track:${track.track_id}`,
        label: track.title,
      });
    }
  }
  return entries;
}
