/**
 * Wire format of the frame stream: UTF-8 lines of JSON, one header line
 * followed by frame lines with strictly increasing t. The same payloads
 * arrive over the live socket, one message per line.
 */

export const SCHEMA_VERSION = 1;

export const BACKGROUND_KINDS = ["cloud", "water", "ice"] as const;
export type BackgroundKind = (typeof BACKGROUND_KINDS)[number];

export interface StreamHeader {
  schemaVersion: number;
  fps: number;
  durationS: number;
  trackId: string;
}

export interface ObjectParams {
  dispersion: number;
  metalness: number;
  hueDeg: number;
}

export interface BackgroundParams {
  kind: BackgroundKind;
  surfaceRoughness: number;
  hueDeg: number;
  value: number;
  saturation: number;
}

export interface VisualFrame {
  t: number;
  object: ObjectParams;
  background: BackgroundParams;
}

/** The stream announces a schema this client does not speak. */
export class SchemaMismatch extends Error {
  constructor(got: unknown) {
    super(`stream schema_version ${String(got)} is unsupported, this client speaks ${SCHEMA_VERSION}`);
    this.name = "SchemaMismatch";
  }
}

/** A line or field violates the stream contract. */
export class MalformedStream extends Error {
  constructor(message: string) {
    super(message);
    this.name = "MalformedStream";
  }
}

function asRecord(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new MalformedStream(`${what} is not a JSON object`);
  }
  return value as Record<string, unknown>;
}

function numberField(obj: Record<string, unknown>, key: string, what: string): number {
  const v = obj[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new MalformedStream(`${what}.${key} is missing or not a finite number`);
  }
  return v;
}

// unit-range channels are emitted rounded to 6 digits, so [0, 1] is exact
function unitField(obj: Record<string, unknown>, key: string, what: string): number {
  const v = numberField(obj, key, what);
  if (v < 0 || v > 1) {
    throw new MalformedStream(`${what}.${key}=${v} is outside [0, 1]`);
  }
  return v;
}

function hueField(obj: Record<string, unknown>, key: string, what: string): number {
  const v = numberField(obj, key, what);
  if (v < 0 || v > 360) {
    throw new MalformedStream(`${what}.${key}=${v} is outside [0, 360]`);
  }
  return v;
}

export function parseHeader(line: string): StreamHeader {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new MalformedStream("header line is not valid JSON");
  }
  const obj = asRecord(raw, "header");
  if (obj["schema_version"] !== SCHEMA_VERSION) {
    throw new SchemaMismatch(obj["schema_version"]);
  }
  const fps = numberField(obj, "fps", "header");
  if (fps <= 0) {
    throw new MalformedStream(`header.fps=${fps} is not positive`);
  }
  const durationS = numberField(obj, "duration_s", "header");
  if (durationS < 0) {
    throw new MalformedStream(`header.duration_s=${durationS} is negative`);
  }
  const trackId = obj["track_id"];
  if (typeof trackId !== "string") {
    throw new MalformedStream("header.track_id is missing or not a string");
  }
  return { schemaVersion: SCHEMA_VERSION, fps, durationS, trackId };
}

export function frameFromJson(raw: unknown): VisualFrame {
  const obj = asRecord(raw, "frame");
  const t = numberField(obj, "t", "frame");
  if (t < 0) {
    throw new MalformedStream(`frame.t=${t} is negative`);
  }
  const object = asRecord(obj["object"], "frame.object");
  const background = asRecord(obj["background"], "frame.background");
  const kind = background["kind"];
  if (typeof kind !== "string" || !(BACKGROUND_KINDS as readonly string[]).includes(kind)) {
    throw new MalformedStream(
      `frame.background.kind=${String(kind)} is not one of ${BACKGROUND_KINDS.join("/")}`,
    );
  }
  return {
    t,
    object: {
      dispersion: unitField(object, "dispersion", "frame.object"),
      metalness: unitField(object, "metalness", "frame.object"),
      hueDeg: hueField(object, "hue_deg", "frame.object"),
    },
    background: {
      kind: kind as BackgroundKind,
      surfaceRoughness: unitField(background, "surface_roughness", "frame.background"),
      hueDeg: hueField(background, "hue_deg", "frame.background"),
      value: unitField(background, "value", "frame.background"),
      saturation: unitField(background, "saturation", "frame.background"),
    },
  };
}

export function parseFrame(line: string): VisualFrame {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new MalformedStream("frame line is not valid JSON");
  }
  return frameFromJson(raw);
}

/** Lenient variant for the live path, where bad frames are dropped not fatal. */
export function tryParseFrame(line: string): VisualFrame | null {
  try {
    return parseFrame(line);
  } catch (err) {
    if (err instanceof MalformedStream) {
      return null;
    }
    throw err;
  }
}

export interface ParsedStream {
  header: StreamHeader;
  frames: VisualFrame[];
}

/**
 * Parse a complete stream file. Blank lines are skipped; the first non-blank
 * line must be the header and frame times must strictly increase.
 */
export function parseStream(text: string): ParsedStream {
  let header: StreamHeader | null = null;
  const frames: VisualFrame[] = [];
  let prevT = -Infinity;
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i] ?? "";
    if (line.trim().length === 0) {
      continue;
    }
    if (header === null) {
      header = parseHeader(line);
      continue;
    }
    const frame = parseFrame(line);
    if (frame.t <= prevT) {
      throw new MalformedStream(`frame.t=${frame.t} on line ${i + 1} does not increase past ${prevT}`);
    }
    prevT = frame.t;
    frames.push(frame);
  }
  if (header === null) {
    throw new MalformedStream("stream has no header line");
  }
  return { header, frames };
}
