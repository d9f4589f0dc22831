/**
 * Pure reduction from wire frames to renderable scene state. No rendering
 * library in here: identical frame sequences must produce identical state
 * sequences, and the tests lean on that determinism.
 *
 * Every frame field lands in exactly one scene property:
 *   t                            -> SceneState.t
 *   object.dispersion            -> subSpherePositions (radial travel)
 *   object.metalness             -> materialBlend
 *   object.hue_deg               -> objectColor
 *   background.kind              -> backgroundKind
 *   background.surface_roughness -> backgroundRoughness
 *   background.hue_deg           -> backgroundColor hue
 *   background.saturation        -> backgroundColor saturation
 *   background.value             -> backgroundColor value
 */

import { BACKGROUND_KINDS, type BackgroundKind, type VisualFrame } from "./protocol.js";

export const SUB_SPHERE_COUNT = 256;
export const BASE_RADIUS = 1.0;
/** Radial travel at dispersion 1, in units of BASE_RADIUS. */
export const DISPERSION_GAIN = 1.5;

// display constants: the stream drives only the object's hue
export const OBJECT_SATURATION = 0.85;
export const OBJECT_VALUE = 0.95;

export interface Vec3 {
  x: number;
  y: number;
  z: number;
}

export interface Rgb {
  r: number;
  g: number;
  b: number;
}

export interface SceneState {
  t: number;
  /** One entry per sub-sphere: layout direction scaled by the dispersed radius. */
  subSpherePositions: Vec3[];
  /** 0 is a plain dielectric surface, 1 is fully metallic. */
  materialBlend: number;
  objectColor: Rgb;
  backgroundKind: BackgroundKind;
  backgroundColor: Rgb;
  /** Agitation of the active preset: wave chop, cloud churn, facet shimmer. */
  backgroundRoughness: number;
}

/**
 * Unit directions on a Fibonacci sphere. Deterministic, and evenly spread
 * enough that the cluster reads as one giant sphere at dispersion 0.
 */
export function sphereLayout(count: number = SUB_SPHERE_COUNT): Vec3[] {
  const golden = Math.PI * (3 - Math.sqrt(5));
  const out: Vec3[] = [];
  for (let i = 0; i < count; i++) {
    const y = 1 - (2 * (i + 0.5)) / count;
    const ring = Math.sqrt(Math.max(0, 1 - y * y));
    const phi = golden * i;
    out.push({ x: ring * Math.cos(phi), y, z: ring * Math.sin(phi) });
  }
  return out;
}

let cachedLayout: Vec3[] | null = null;

function layout(): Vec3[] {
  if (cachedLayout === null) {
    cachedLayout = sphereLayout();
  }
  return cachedLayout;
}

export function hsvToRgb(hueDeg: number, saturation: number, value: number): Rgb {
  const h = (((hueDeg % 360) + 360) % 360) / 60;
  const c = value * saturation;
  const x = c * (1 - Math.abs((h % 2) - 1));
  const m = value - c;
  let r = 0;
  let g = 0;
  let b = 0;
  if (h < 1) {
    r = c;
    g = x;
  } else if (h < 2) {
    r = x;
    g = c;
  } else if (h < 3) {
    g = c;
    b = x;
  } else if (h < 4) {
    g = x;
    b = c;
  } else if (h < 5) {
    r = x;
    b = c;
  } else {
    r = c;
    b = x;
  }
  return { r: r + m, g: g + m, b: b + m };
}

export function frameToScene(frame: VisualFrame): SceneState {
  const radius = BASE_RADIUS * (1 + DISPERSION_GAIN * frame.object.dispersion);
  return {
    t: frame.t,
    subSpherePositions: layout().map((d) => ({ x: d.x * radius, y: d.y * radius, z: d.z * radius })),
    materialBlend: frame.object.metalness,
    objectColor: hsvToRgb(frame.object.hueDeg, OBJECT_SATURATION, OBJECT_VALUE),
    backgroundKind: frame.background.kind,
    backgroundColor: hsvToRgb(frame.background.hueDeg, frame.background.saturation, frame.background.value),
    backgroundRoughness: frame.background.surfaceRoughness,
  };
}

/** True when moving to `next` must swap the active background preset. */
export function presetSwapped(prev: SceneState | null, next: SceneState): boolean {
  return prev !== null && prev.backgroundKind !== next.backgroundKind;
}

/** Scene shown before any frame arrives: resting cluster over a dim cloud backdrop. */
export function initialSceneState(): SceneState {
  return {
    t: 0,
    subSpherePositions: layout().map((d) => ({ ...d })),
    materialBlend: 0,
    objectColor: hsvToRgb(0, 0, 0.8),
    backgroundKind: "cloud",
    backgroundColor: { r: 0.05, g: 0.06, b: 0.09 },
    backgroundRoughness: 0.2,
  };
}

function inUnit(v: number): boolean {
  return Number.isFinite(v) && v >= 0 && v <= 1;
}

function usableFrame(frame: VisualFrame): boolean {
  return (
    Number.isFinite(frame.t) &&
    frame.t >= 0 &&
    inUnit(frame.object.dispersion) &&
    inUnit(frame.object.metalness) &&
    Number.isFinite(frame.object.hueDeg) &&
    inUnit(frame.background.surfaceRoughness) &&
    Number.isFinite(frame.background.hueDeg) &&
    inUnit(frame.background.value) &&
    inUnit(frame.background.saturation) &&
    (BACKGROUND_KINDS as readonly string[]).includes(frame.background.kind)
  );
}

/**
 * Apply one frame on top of the previous state. An unusable frame is dropped
 * with a console diagnostic and the previous state is returned unchanged.
 */
export function renderFrame(prev: SceneState | null, frame: VisualFrame): SceneState {
  if (!usableFrame(frame)) {
    console.warn(`dropping unusable frame at t=${String(frame?.t)}`);
    return prev ?? initialSceneState();
  }
  return frameToScene(frame);
}
