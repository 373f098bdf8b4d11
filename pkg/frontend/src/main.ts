import { ApiClient } from "./api.js";
import { CaptureLoop, frameGrabber, openWebcam } from "./capture.js";
import { dropdownRequest, makeControls } from "./controls.js";
import { subscribeEvents } from "./events.js";
import { NowPlaying } from "./player.js";
import { dropdownEntries, renderSnapshot, type SnapshotSlots } from "./view.js";
import type { Snapshot } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient();
  const status = el<HTMLElement>("status");
  const dropdown = el<HTMLSelectElement>("dropdown");
  const audio = el<HTMLAudioElement>("audio");
  const playPause = el<HTMLButtonElement>("play-pause");

  const slots: SnapshotSlots = {
    detected: el("detected"),
    smoothed: el("smoothed"),
    mood: el("mood"),
    trackTitle: el("track-title"),
    playlist: el("playlist"),
    setOverride: (active) => el("override").classList.toggle("on", active),
    setPlaying: (playing) => {
      playPause.textContent = playing ? "pause" : "play";
      playPause.dataset.playing = String(playing);
    },
    setDropdownValue: (value) => {
      dropdown.value = value;
    },
  };

  const sessionId = await api.createSession();

  const nowPlaying = new NowPlaying(
    audio,
    (trackId) => api.audioUrl(trackId),
    () => controls.trackEnded(),
  );
  const apply = (snap: Snapshot) => {
    renderSnapshot(slots, snap);
    nowPlaying.applySnapshot(snap);
  };
  const controls = makeControls({
    api,
    sessionId,
    applySnapshot: apply,
    optimistic: () => el("override").classList.add("on"),
    onError: (err) => {
      status.textContent = `control failed: ${String(err)}`;
    },
  });

  for (const entry of dropdownEntries(await api.playlists())) {
    let group = dropdown.querySelector<HTMLOptGroupElement>(
      `optgroup[label="${entry.group}"]`,
    );
    if (!group) {
      group = document.createElement("optgroup");
      group.label = entry.group;
      dropdown.appendChild(group);
    }
    const option = document.createElement("option");
    option.value = entry.value;
    option.textContent = entry.label;
    group.appendChild(option);
  }

  el<HTMLButtonElement>("prev").onclick = () => controls.prev();
  el<HTMLButtonElement>("next").onclick = () => controls.next();
  playPause.onclick = () => controls.setPlaying(playPause.dataset.playing !== "true");
  dropdown.onchange = () => {
    const request = dropdownRequest(dropdown.value);
    if (request?.command === "select_playlist" && request.mood) {
      controls.selectPlaylist(request.mood);
    } else if (request?.command === "select_track" && request.track_id) {
      controls.selectTrack(request.track_id);
    }
  };
  el<HTMLInputElement>("volume").oninput = (ev) => {
    nowPlaying.setVolume(Number((ev.target as HTMLInputElement).value));
  };

  apply(await api.state(sessionId));
  subscribeEvents(api.eventsUrl(sessionId), apply);

  const stream = await openWebcam();
  if (!stream) {
    status.textContent = "camera unavailable — manual-only mode";
    return;
  }
  const video = el<HTMLVideoElement>("webcam");
  video.srcObject = stream;
  await video.play();

  const loop = new CaptureLoop(
    {
      grabFrame: frameGrabber(video),
      postFrame: (imageB64, capturedAtMs) =>
        api.postFrame(sessionId, imageB64, capturedAtMs).then(apply),
      isVisible: () => document.visibilityState === "visible",
      onError: (err) => console.warn("frame submission failed:", err),
    },
    await api.captureIntervalMs(),
  );
  loop.start();
  status.textContent = `watching every ${loop.intervalMs / 1000}s`;
}

boot().catch((err) => {
  const status = document.getElementById("status");
  if (status) status.textContent = `startup failed: ${String(err)}`;
  console.error(err);
});
