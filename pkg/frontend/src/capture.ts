/** Webcam capture loop: one frame per interval, posted to the backend.
 *  Pauses while the tab is hidden and skips ticks whose predecessor is still
 *  in flight. All effects are injected so the loop is testable without a
 *  camera or a DOM. */

export interface CaptureDeps {
  /** Returns base64 image bytes (no data-URL prefix), or null when no frame
   *  is available (camera warming up, tab backgrounded, ...). */
  grabFrame(): Promise<string | null>;
  postFrame(imageB64: string, capturedAtMs: number): Promise<unknown>;
  isVisible?: () => boolean;
  now?: () => number;
  onError?: (err: unknown) => void;
}

export class CaptureLoop {
  private timer: ReturnType<typeof setInterval> | null = null;
  private busy = false;

  constructor(
    private readonly deps: CaptureDeps,
    readonly intervalMs: number = 3000,
  ) {}

  get running(): boolean {
    return this.timer !== null;
  }

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  private async tick(): Promise<void> {
    if (this.busy) return;
    if (this.deps.isVisible && !this.deps.isVisible()) return;
    this.busy = true;
    try {
      const frame = await this.deps.grabFrame();
      if (frame !== null && frame !== "") {
        const at = this.deps.now ? this.deps.now() : Date.now();
        await this.deps.postFrame(frame, at);
      }
    } catch (err) {
      this.deps.onError?.(err);
    } finally {
      this.busy = false;
    }
  }
}

/** Ask for the webcam; null means permission denied or no device, in which
 *  case the UI degrades to manual-only mode. */
export async function openWebcam(): Promise<MediaStream | null> {
  try {
    return await navigator.mediaDevices.getUserMedia({ video: true });
  } catch (err) {
    console.warn("webcam unavailable, manual-only mode:", err);
    return null;
  }
}

/** Grab the current video frame, downscaled so the longest side stays within
 *  maxSide, as base64 JPEG bytes. */
export function frameGrabber(
  video: HTMLVideoElement,
  maxSide = 640,
  quality = 0.7,
): () => Promise<string | null> {
  const canvas = document.createElement("canvas");
  return async () => {
    const w = video.videoWidth;
    const h = video.videoHeight;
    if (!w || !h) return null;
    const scale = Math.min(1, maxSide / Math.max(w, h));
    canvas.width = Math.round(w * scale);
    canvas.height = Math.round(h * scale);
    const ctx = canvas.getContext("2d");
    if (!ctx) return null;
    ctx.drawImage(video, 0, 0, canvas.width, canvas.height);
    const dataUrl = canvas.toDataURL("image/jpeg", quality);
    const marker = ";base64,";
    const idx = dataUrl.indexOf(marker);
    return idx === -1 ? null : dataUrl.slice(idx + marker.length);
  };
}
