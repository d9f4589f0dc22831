/**
 * Page wiring: open a stream (file upload, fetchable URL, or live ws://),
 * drive playback, and feed states to the renderer. Seeking a live stream is
 * refused non-fatally; lost connections retry and report in the status line.
 */

import { FileFrameSource, openFrameSource, type FrameSource } from "./frameSource.js";
import { FilePlayback, LivePlayback, SeekUnsupported } from "./playback.js";
import { renderFrame, type SceneState } from "./sceneState.js";
import { SceneRenderer } from "./render3d.js";
import type { VisualFrame } from "./protocol.js";

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing page element #${id}`);
  }
  return node as T;
}

const canvas = element<HTMLCanvasElement>("view");
const urlInput = element<HTMLInputElement>("source-url");
const fileInput = element<HTMLInputElement>("source-file");
const openButton = element<HTMLButtonElement>("open");
const playButton = element<HTMLButtonElement>("play-pause");
const seekSlider = element<HTMLInputElement>("seek");
const statusLine = element<HTMLElement>("status");

const renderer = new SceneRenderer(canvas);
renderer.start();

let scene: SceneState | null = null;
let filePlayback: FilePlayback | null = null;
let livePlayback: LivePlayback | null = null;
let source: FrameSource | null = null;
let rafHandle = 0;
let lastTickMs = 0;

function status(message: string): void {
  statusLine.textContent = message;
}

function applyFrame(frame: VisualFrame): void {
  scene = renderFrame(scene, frame);
  renderer.applyScene(scene);
  if (source !== null && !source.live && source.header.durationS > 0) {
    seekSlider.value = String(frame.t / source.header.durationS);
  }
}

function stopCurrent(): void {
  if (rafHandle !== 0) {
    cancelAnimationFrame(rafHandle);
    rafHandle = 0;
  }
  livePlayback?.stop();
  livePlayback = null;
  filePlayback = null;
  source?.close();
  source = null;
  scene = null;
}

function fileTick(nowMs: number): void {
  if (filePlayback === null) {
    return;
  }
  const dtS = lastTickMs === 0 ? 0 : (nowMs - lastTickMs) / 1000;
  lastTickMs = nowMs;
  for (const frame of filePlayback.advance(dtS)) {
    applyFrame(frame);
  }
  if (!filePlayback.done) {
    rafHandle = requestAnimationFrame(fileTick);
  } else {
    status("playback finished");
    playButton.textContent = "play";
  }
}

async function openSource(): Promise<void> {
  stopCurrent();
  const picked = fileInput.files?.[0];
  const target: string | Blob = picked ?? urlInput.value.trim();
  if (typeof target === "string" && target.length === 0) {
    status("enter a stream URL (ws://host:port or a .ndjson path) or pick a file");
    return;
  }
  status("opening...");
  try {
    source = await openFrameSource(target, {
      onStatus: status,
      maxRetries: 3,
      retryDelayMs: 1000,
    });
  } catch (err) {
    status(err instanceof Error ? `${err.name}: ${err.message}` : String(err));
    return;
  }
  const header = source.header;
  status(`track ${header.trackId}: ${header.durationS.toFixed(1)} s at ${header.fps} fps${source.live ? " (live)" : ""}`);
  playButton.textContent = "pause";
  if (source instanceof FileFrameSource) {
    filePlayback = new FilePlayback(source.frames);
    filePlayback.play();
    lastTickMs = 0;
    rafHandle = requestAnimationFrame(fileTick);
  } else {
    livePlayback = new LivePlayback(source);
    livePlayback
      .run(applyFrame)
      .then(() => status("live stream ended"))
      .catch((err: unknown) => status(err instanceof Error ? `${err.name}: ${err.message}` : String(err)));
  }
}

openButton.addEventListener("click", () => {
  void openSource();
});

playButton.addEventListener("click", () => {
  if (filePlayback !== null) {
    if (filePlayback.playing) {
      filePlayback.pause();
      playButton.textContent = "play";
    } else {
      filePlayback.play();
      playButton.textContent = "pause";
    }
  } else if (livePlayback !== null) {
    if (livePlayback.playing) {
      livePlayback.pause();
      playButton.textContent = "play";
    } else {
      livePlayback.play();
      playButton.textContent = "pause";
    }
  }
});

seekSlider.addEventListener("input", () => {
  const fraction = Number(seekSlider.value);
  if (filePlayback !== null && source !== null) {
    const frame = filePlayback.seek(fraction * source.header.durationS);
    applyFrame(frame);
  } else if (livePlayback !== null) {
    try {
      livePlayback.seek(fraction);
    } catch (err) {
      if (err instanceof SeekUnsupported) {
        status("live streams cannot seek; showing the present");
      } else {
        throw err;
      }
    }
  }
});
