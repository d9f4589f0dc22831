/**
 * Frame sources: a fully loaded stream file, or a live socket feeding a
 * bounded latest-wins queue. Both hand out frames in arrival order through
 * the same async pull interface so playback code does not care which one
 * it is driving.
 */

import {
  MalformedStream,
  SchemaMismatch,
  parseHeader,
  parseStream,
  tryParseFrame,
  type StreamHeader,
  type VisualFrame,
} from "./protocol.js";

/** The live connection dropped and could not be re-established. */
export class ConnectionLost extends Error {
  constructor(detail: string) {
    super(`connection lost: ${detail}`);
    this.name = "ConnectionLost";
  }
}

export interface FrameSource {
  readonly header: StreamHeader;
  readonly live: boolean;
  /** Next frame in order, or null once the stream has ended. */
  next(): Promise<VisualFrame | null>;
  close(): void;
}

export class FileFrameSource implements FrameSource {
  readonly live = false;
  readonly header: StreamHeader;
  readonly frames: readonly VisualFrame[];
  private cursor = 0;

  constructor(text: string) {
    const parsed = parseStream(text);
    this.header = parsed.header;
    this.frames = parsed.frames;
  }

  async next(): Promise<VisualFrame | null> {
    if (this.cursor >= this.frames.length) {
      return null;
    }
    const frame = this.frames[this.cursor];
    this.cursor += 1;
    return frame ?? null;
  }

  close(): void {
    this.cursor = this.frames.length;
  }
}

/**
 * Structural slice of the browser WebSocket, injectable so tests can drive
 * a fake transport.
 */
export interface SocketLike {
  onopen: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: ((event: { wasClean: boolean }) => void) | null;
  onerror: (() => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface LiveOptions {
  socketFactory?: SocketFactory;
  /** Receives operator-facing status lines (connected, connection lost, retrying). */
  onStatus?: (message: string) => void;
  /** Reconnect attempts after an unclean close before giving up. */
  maxRetries?: number;
  retryDelayMs?: number;
  /** Undelivered frames kept while the consumer lags; oldest are dropped first. */
  queueCapacity?: number;
}

interface Waiter {
  resolve: (frame: VisualFrame | null) => void;
  reject: (err: Error) => void;
}

export class LiveFrameSource implements FrameSource {
  readonly live = true;
  header: StreamHeader;

  private readonly url: string;
  private readonly factory: SocketFactory;
  private readonly onStatus: (message: string) => void;
  private readonly retryDelayMs: number;
  private readonly capacity: number;
  private retriesLeft: number;

  private socket: SocketLike | null = null;
  private expectingHeader = true;
  private firstConnection = true;
  private closedManually = false;

  private queue: VisualFrame[] = [];
  private waiters: Waiter[] = [];
  private ended = false;
  private endError: Error | null = null;

  private constructor(url: string, header: StreamHeader, opts: Required<Pick<LiveOptions, "socketFactory" | "onStatus" | "maxRetries" | "retryDelayMs" | "queueCapacity">>) {
    this.url = url;
    this.header = header;
    this.factory = opts.socketFactory;
    this.onStatus = opts.onStatus;
    this.retriesLeft = opts.maxRetries;
    this.retryDelayMs = opts.retryDelayMs;
    this.capacity = opts.queueCapacity;
  }

  /**
   * Connect and resolve once the header has arrived and validated.
   * Rejects with SchemaMismatch on a wrong schema_version.
   */
  static open(url: string, opts: LiveOptions = {}): Promise<LiveFrameSource> {
    const resolved = {
      socketFactory: opts.socketFactory ?? ((u: string) => new WebSocket(u) as unknown as SocketLike),
      onStatus: opts.onStatus ?? (() => {}),
      maxRetries: opts.maxRetries ?? 3,
      retryDelayMs: opts.retryDelayMs ?? 1000,
      queueCapacity: opts.queueCapacity ?? 8,
    };
    return new Promise((resolve, reject) => {
      const source = new LiveFrameSource(url, placeholderHeader(), resolved);
      source.connect(
        (header) => {
          source.header = header;
          resolve(source);
        },
        (err) => reject(err),
      );
    });
  }

  private connect(onHeader: (header: StreamHeader) => void, onFail: (err: Error) => void): void {
    this.expectingHeader = true;
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => this.onStatus(`connected to ${this.url}`);
    socket.onerror = () => this.onStatus(`socket error on ${this.url}`);
    socket.onmessage = (event) => {
      const text = typeof event.data === "string" ? event.data : "";
      if (this.expectingHeader) {
        let header: StreamHeader;
        try {
          header = parseHeader(text);
        } catch (err) {
          const failure = err instanceof Error ? err : new Error(String(err));
          socket.close();
          if (this.firstConnection) {
            onFail(failure);
          } else {
            this.end(failure);
          }
          return;
        }
        this.expectingHeader = false;
        if (this.firstConnection) {
          this.firstConnection = false;
          onHeader(header);
        } else {
          this.header = header;
        }
        return;
      }
      const frame = tryParseFrame(text);
      if (frame === null) {
        console.warn(`dropping malformed live frame: ${text.slice(0, 120)}`);
        return;
      }
      this.push(frame);
    };
    socket.onclose = (event) => {
      if (this.closedManually) {
        this.end(null);
        return;
      }
      if (event.wasClean && !this.expectingHeader) {
        // normal end of playback: the server closes after the last frame
        this.end(null);
        return;
      }
      if (this.retriesLeft > 0) {
        this.retriesLeft -= 1;
        this.onStatus(`connection lost, retrying in ${this.retryDelayMs} ms (${this.retriesLeft + 1} attempts left)`);
        setTimeout(() => {
          if (!this.closedManually && !this.ended) {
            this.connect(onHeader, onFail);
          }
        }, this.retryDelayMs);
        return;
      }
      this.onStatus("connection lost, giving up");
      const failure = new ConnectionLost(this.url);
      if (this.firstConnection) {
        onFail(failure);
      } else {
        this.end(failure);
      }
    };
  }

  private push(frame: VisualFrame): void {
    if (this.ended) {
      return;
    }
    const waiter = this.waiters.shift();
    if (waiter !== undefined) {
      waiter.resolve(frame);
      return;
    }
    if (this.queue.length >= this.capacity) {
      this.queue.shift();
    }
    this.queue.push(frame);
  }

  private end(err: Error | null): void {
    if (this.ended) {
      return;
    }
    this.ended = true;
    this.endError = err;
    for (const waiter of this.waiters.splice(0)) {
      if (err !== null) {
        waiter.reject(err);
      } else {
        waiter.resolve(null);
      }
    }
  }

  next(): Promise<VisualFrame | null> {
    const queued = this.queue.shift();
    if (queued !== undefined) {
      return Promise.resolve(queued);
    }
    if (this.ended) {
      return this.endError !== null ? Promise.reject(this.endError) : Promise.resolve(null);
    }
    return new Promise((resolve, reject) => {
      this.waiters.push({ resolve, reject });
    });
  }

  close(): void {
    this.closedManually = true;
    this.socket?.close();
    this.end(null);
  }
}

function placeholderHeader(): StreamHeader {
  return { schemaVersion: 1, fps: 30, durationS: 0, trackId: "" };
}

/**
 * Open a frame source from a ws:// or wss:// URL (live), a fetchable URL
 * (stream file), or an in-memory Blob/File (stream file).
 */
export async function openFrameSource(
  urlOrFile: string | Blob,
  opts: LiveOptions = {},
): Promise<FrameSource> {
  if (typeof urlOrFile !== "string") {
    return new FileFrameSource(await urlOrFile.text());
  }
  if (urlOrFile.startsWith("ws://") || urlOrFile.startsWith("wss://")) {
    return LiveFrameSource.open(urlOrFile, opts);
  }
  let response: Response;
  try {
    response = await fetch(urlOrFile);
  } catch {
    throw new ConnectionLost(`cannot reach ${urlOrFile}`);
  }
  if (!response.ok) {
    throw new MalformedStream(`fetching ${urlOrFile} returned status ${response.status}`);
  }
  return new FileFrameSource(await response.text());
}

export { SchemaMismatch };
