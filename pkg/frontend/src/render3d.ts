/**
 * three.js scene graph driven by SceneState. The vocal object is an
 * instanced cluster of small spheres forming one giant sphere; the backdrop
 * is one of three stylized procedural presets (cloud, water, ice), exactly
 * one visible at a time. Only the shimmer animation uses wall-clock time;
 * everything else is a pure function of the applied state.
 */

import * as THREE from "three";
import { BACKGROUND_KINDS, type BackgroundKind } from "./protocol.js";
import { SUB_SPHERE_COUNT, initialSceneState, type SceneState } from "./sceneState.js";

// deterministic pseudo-random placement for preset geometry
function hash01(i: number): number {
  const x = Math.sin(i * 12.9898 + 78.233) * 43758.5453;
  return x - Math.floor(x);
}

function buildCloudPreset(): THREE.Group {
  const group = new THREE.Group();
  const count = 420;
  const positions = new Float32Array(count * 3);
  for (let i = 0; i < count; i++) {
    const angle = hash01(i * 3) * Math.PI * 2;
    const radius = 6 + hash01(i * 3 + 1) * 14;
    positions[i * 3] = Math.cos(angle) * radius;
    positions[i * 3 + 1] = -2 + hash01(i * 3 + 2) * 7;
    positions[i * 3 + 2] = Math.sin(angle) * radius - 6;
  }
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
  const material = new THREE.PointsMaterial({
    color: 0xf2f4f8,
    size: 1.6,
    transparent: true,
    opacity: 0.35,
    depthWrite: false,
    sizeAttenuation: true,
  });
  group.add(new THREE.Points(geometry, material));
  return group;
}

function buildWaterPreset(): THREE.Group {
  const group = new THREE.Group();
  const geometry = new THREE.PlaneGeometry(60, 60, 48, 48);
  geometry.rotateX(-Math.PI / 2);
  const material = new THREE.MeshStandardMaterial({
    color: 0x9fc4dd,
    metalness: 0.1,
    roughness: 0.35,
    transparent: true,
    opacity: 0.85,
  });
  const plane = new THREE.Mesh(geometry, material);
  plane.position.y = -2.2;
  group.add(plane);
  return group;
}

function buildIcePreset(): THREE.Group {
  const group = new THREE.Group();
  const material = new THREE.MeshStandardMaterial({
    color: 0xcfe6f2,
    metalness: 0.05,
    roughness: 0.25,
    flatShading: true,
  });
  const shardCount = 26;
  for (let i = 0; i < shardCount; i++) {
    const height = 1.5 + hash01(i * 7) * 4.5;
    const shard = new THREE.Mesh(new THREE.ConeGeometry(0.5 + hash01(i * 7 + 1) * 0.9, height, 5), material);
    const angle = (i / shardCount) * Math.PI * 2;
    const radius = 5 + hash01(i * 7 + 2) * 9;
    shard.position.set(Math.cos(angle) * radius, -2.2 + height / 2, Math.sin(angle) * radius - 3);
    shard.rotation.y = hash01(i * 7 + 3) * Math.PI;
    group.add(shard);
  }
  return group;
}

export class SceneRenderer {
  private readonly renderer: THREE.WebGLRenderer;
  private readonly scene: THREE.Scene;
  private readonly camera: THREE.PerspectiveCamera;
  private readonly cluster: THREE.InstancedMesh;
  private readonly clusterMaterial: THREE.MeshStandardMaterial;
  private readonly presets: Record<BackgroundKind, THREE.Group>;
  private readonly clock = new THREE.Clock();
  private readonly waterGeometry: THREE.PlaneGeometry;
  private readonly waterRestY: Float32Array;
  private state: SceneState = initialSceneState();

  constructor(canvas: HTMLCanvasElement) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.renderer.setPixelRatio(window.devicePixelRatio);
    this.scene = new THREE.Scene();
    this.camera = new THREE.PerspectiveCamera(55, 1, 0.1, 200);
    this.camera.position.set(0, 0.6, 5.2);
    this.camera.lookAt(0, 0, 0);

    this.scene.add(new THREE.AmbientLight(0xffffff, 0.55));
    const key = new THREE.DirectionalLight(0xffffff, 1.4);
    key.position.set(4, 6, 5);
    this.scene.add(key);
    const rim = new THREE.DirectionalLight(0x88aaff, 0.5);
    rim.position.set(-5, -2, -4);
    this.scene.add(rim);

    this.clusterMaterial = new THREE.MeshStandardMaterial({ color: 0xffffff });
    this.cluster = new THREE.InstancedMesh(
      new THREE.SphereGeometry(0.075, 16, 12),
      this.clusterMaterial,
      SUB_SPHERE_COUNT,
    );
    this.scene.add(this.cluster);

    this.presets = {
      cloud: buildCloudPreset(),
      water: buildWaterPreset(),
      ice: buildIcePreset(),
    };
    for (const kind of BACKGROUND_KINDS) {
      this.scene.add(this.presets[kind]);
    }
    const water = this.presets.water.children[0] as THREE.Mesh;
    this.waterGeometry = water.geometry as THREE.PlaneGeometry;
    const rest = this.waterGeometry.getAttribute("position") as THREE.BufferAttribute;
    this.waterRestY = new Float32Array(rest.count);
    for (let i = 0; i < rest.count; i++) {
      this.waterRestY[i] = rest.getY(i);
    }

    this.applyScene(this.state);
    this.resize();
    window.addEventListener("resize", () => this.resize());
  }

  private resize(): void {
    const width = this.renderer.domElement.clientWidth || window.innerWidth;
    const height = this.renderer.domElement.clientHeight || window.innerHeight;
    this.renderer.setSize(width, height, false);
    this.camera.aspect = width / height;
    this.camera.updateProjectionMatrix();
  }

  /** Push one state into the scene graph. Never mutates the state object. */
  applyScene(state: SceneState): void {
    this.state = state;
    const matrix = new THREE.Matrix4();
    state.subSpherePositions.forEach((p, i) => {
      matrix.setPosition(p.x, p.y, p.z);
      this.cluster.setMatrixAt(i, matrix);
    });
    this.cluster.instanceMatrix.needsUpdate = true;

    // plain -> metal blend: metalness up, roughness down
    this.clusterMaterial.metalness = state.materialBlend;
    this.clusterMaterial.roughness = 0.9 - 0.72 * state.materialBlend;
    this.clusterMaterial.color.setRGB(state.objectColor.r, state.objectColor.g, state.objectColor.b);

    this.scene.background = new THREE.Color(
      state.backgroundColor.r,
      state.backgroundColor.g,
      state.backgroundColor.b,
    );
    for (const kind of BACKGROUND_KINDS) {
      this.presets[kind].visible = kind === state.backgroundKind;
    }
  }

  /** Wall-clock shimmer of the active preset; scene parameters stay untouched. */
  private animatePresets(elapsedS: number): void {
    const agitation = this.state.backgroundRoughness;
    const cloud = this.presets.cloud;
    cloud.rotation.y = elapsedS * (0.01 + 0.06 * agitation);

    if (this.presets.water.visible) {
      const position = this.waterGeometry.getAttribute("position") as THREE.BufferAttribute;
      const amplitude = 0.04 + 0.5 * agitation;
      for (let i = 0; i < position.count; i++) {
        const x = position.getX(i);
        const z = position.getZ(i);
        const rest = this.waterRestY[i] ?? 0;
        position.setY(i, rest + amplitude * Math.sin(0.6 * x + elapsedS * 1.4) * Math.cos(0.5 * z + elapsedS));
      }
      position.needsUpdate = true;
      this.waterGeometry.computeVertexNormals();
    }

    this.presets.ice.rotation.y = Math.sin(elapsedS * 0.2) * 0.08 * (0.3 + agitation);
  }

  start(): void {
    this.renderer.setAnimationLoop(() => {
      this.animatePresets(this.clock.getElapsedTime());
      this.renderer.render(this.scene, this.camera);
    });
  }
}
