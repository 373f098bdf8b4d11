/** Wire documents exchanged with the backend. The UI never computes emotions
 *  or picks tracks itself; every rendered value originates in one of these. */

export interface TrackRef {
  track_id: string;
  title: string;
}

export interface Snapshot {
  detected_emotion: string | null;
  smoothed_emotion: string | null;
  mood: string | null;
  playlist_id: string;
  track: TrackRef;
  track_index: number;
  playing: boolean;
  override_active: boolean;
  strategy_in_use: string;
  seq: number;
}

export interface TrackEntry {
  track_id: string;
  title: string;
  duration_s: number | null;
}

export interface PlaylistSummary {
  playlist_id: string;
  mood: string;
  track_count: number;
  tracks: TrackEntry[];
}

export type ControlCommand =
  | "next"
  | "prev"
  | "select_track"
  | "select_playlist"
  | "set_playing"
  | "track_ended";

export interface ControlRequest {
  command: ControlCommand;
  track_id?: string;
  mood?: string;
  playing?: boolean;
}
