/**
 * Acceptance check over the bundled golden stream: every frame iterates in
 * order, preset swaps land exactly on the frames where the kind changes,
 * and a future schema version is refused. Each check prints one PASS line.
 */

import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { test } from "node:test";
import { fileURLToPath } from "node:url";

import { FileFrameSource } from "../src/frameSource.js";
import { SchemaMismatch, parseHeader, parseStream, type VisualFrame } from "../src/protocol.js";
import { frameToScene, presetSwapped, type SceneState } from "../src/sceneState.js";

const goldenPath = fileURLToPath(new URL("../../tests/fixtures/golden.ndjson", import.meta.url));
const goldenText = readFileSync(goldenPath, "utf-8");

test("golden stream: all 300 frames iterate in order", async () => {
  const source = new FileFrameSource(goldenText);
  assert.equal(source.header.schemaVersion, 1);
  assert.equal(source.header.fps, 30);
  assert.equal(source.header.durationS, 10);
  assert.equal(source.header.trackId, "golden");

  const seen: VisualFrame[] = [];
  for (let frame = await source.next(); frame !== null; frame = await source.next()) {
    seen.push(frame);
  }
  assert.equal(seen.length, 300);
  for (let i = 1; i < seen.length; i++) {
    assert.ok(seen[i]!.t > seen[i - 1]!.t, `t not increasing at frame ${i}`);
  }
  assert.deepEqual(seen, parseStream(goldenText).frames);
  console.log(`[PASS] golden iteration: ${seen.length} frames delivered in order`);
});

test("golden stream: preset swaps exactly at the kind changes", () => {
  const { frames } = parseStream(goldenText);
  const expected: number[] = [];
  for (let i = 1; i < frames.length; i++) {
    if (frames[i]!.background.kind !== frames[i - 1]!.background.kind) {
      expected.push(i);
    }
  }

  const actual: number[] = [];
  let prev: SceneState | null = null;
  frames.forEach((frame, i) => {
    const scene = frameToScene(frame);
    if (presetSwapped(prev, scene)) {
      actual.push(i);
    }
    prev = scene;
  });

  assert.deepEqual(actual, expected);
  // the fixture exercises all three presets across a known number of swaps
  assert.equal(expected.length, 13);
  const kinds = new Set(frames.map((f) => f.background.kind));
  assert.deepEqual([...kinds].sort(), ["cloud", "ice", "water"]);
  console.log(`[PASS] golden preset swaps: ${actual.length} swaps, all exactly at kind changes`);
});

test("golden stream: schema_version 2 is rejected", () => {
  const v2 = goldenText.replace('"schema_version":1', '"schema_version":2');
  assert.throws(() => parseHeader(v2.split("\n")[0]!), SchemaMismatch);
  assert.throws(() => new FileFrameSource(v2), SchemaMismatch);
  console.log("[PASS] golden schema gate: schema_version 2 refused with SchemaMismatch");
});
