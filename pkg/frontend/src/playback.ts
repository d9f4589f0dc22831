/**
 * Playback control. File playback owns a clock over a fully loaded frame
 * list and supports seeking; live playback is pull-driven by arrival and
 * refuses to seek.
 */

import type { FrameSource } from "./frameSource.js";
import type { VisualFrame } from "./protocol.js";

export class SeekUnsupported extends Error {
  constructor() {
    super("live sources cannot seek");
    this.name = "SeekUnsupported";
  }
}

export class FilePlayback {
  private readonly frames: readonly VisualFrame[];
  private nextIndex = 0;
  private shown: VisualFrame | null = null;
  private clockS: number;
  private running = false;

  constructor(frames: readonly VisualFrame[]) {
    if (frames.length === 0) {
      throw new Error("playback needs at least one frame");
    }
    this.frames = frames;
    // start the cursor on the first frame so play + advance(0) shows it
    this.clockS = frames[0]?.t ?? 0;
  }

  get playing(): boolean {
    return this.running;
  }

  get done(): boolean {
    return this.nextIndex >= this.frames.length;
  }

  current(): VisualFrame | null {
    return this.shown;
  }

  play(): void {
    this.running = true;
  }

  /** Freezes the clock; the shown frame stays put until play resumes. */
  pause(): void {
    this.running = false;
  }

  /** Jump to the frame nearest tS (earlier index wins ties); it shows immediately. */
  seek(tS: number): VisualFrame {
    let best = 0;
    let bestDist = Infinity;
    for (let i = 0; i < this.frames.length; i++) {
      const dist = Math.abs((this.frames[i]?.t ?? 0) - tS);
      if (dist < bestDist) {
        bestDist = dist;
        best = i;
      }
    }
    const frame = this.frames[best] as VisualFrame;
    this.nextIndex = best + 1;
    this.shown = frame;
    this.clockS = frame.t;
    return frame;
  }

  /**
   * Move the clock forward by dtS and collect the frames that came due,
   * oldest first. Paused playback returns nothing and the clock holds.
   */
  advance(dtS: number): VisualFrame[] {
    if (!this.running || dtS < 0) {
      return [];
    }
    this.clockS += dtS;
    const due: VisualFrame[] = [];
    while (this.nextIndex < this.frames.length) {
      const frame = this.frames[this.nextIndex];
      if (frame === undefined || frame.t > this.clockS + 1e-9) {
        break;
      }
      this.nextIndex += 1;
      this.shown = frame;
      due.push(frame);
    }
    return due;
  }
}

export class LivePlayback {
  private readonly source: FrameSource;
  private paused = false;
  private stopped = false;
  private latestWhilePaused: VisualFrame | null = null;
  private applyFn: ((frame: VisualFrame) => void) | null = null;

  constructor(source: FrameSource) {
    if (!source.live) {
      throw new Error("LivePlayback needs a live source; use FilePlayback for files");
    }
    this.source = source;
  }

  /**
   * Consume the source until it ends, applying each frame as it arrives.
   * While paused, arrivals are not applied; only the newest is kept so
   * resuming jumps to the present.
   */
  async run(apply: (frame: VisualFrame) => void): Promise<void> {
    this.applyFn = apply;
    while (!this.stopped) {
      const frame = await this.source.next();
      if (frame === null) {
        return;
      }
      if (this.paused) {
        this.latestWhilePaused = frame;
        continue;
      }
      apply(frame);
    }
  }

  get playing(): boolean {
    return !this.paused;
  }

  pause(): void {
    this.paused = true;
  }

  play(): void {
    this.paused = false;
    if (this.latestWhilePaused !== null && this.applyFn !== null) {
      this.applyFn(this.latestWhilePaused);
    }
    this.latestWhilePaused = null;
  }

  seek(_tS: number): never {
    throw new SeekUnsupported();
  }

  stop(): void {
    this.stopped = true;
    this.source.close();
  }
}
