/**
 * Bindings for the boxmetrics kernel.
 *
 * Pure marshalling: boxes are serialized to the kernel's line-delimited box
 * and pair files, evaluated by its `batch` CLI subcommand, and the reports
 * parsed back. No metric arithmetic happens on this side.
 */

import { spawnSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";

export type RotationInput =
  | { matrix: ArrayLike<number> }
  | { quaternion: ArrayLike<number> }
  | { euler_xyz: ArrayLike<number> };

export interface Box {
  /** World position of the cuboid center, [x, y, z]. */
  center: ArrayLike<number>;
  /** One of: 9 row-major matrix entries, [w,x,y,z] quaternion, intrinsic XYZ Euler radians. */
  rotation: RotationInput;
  /** Strictly positive extents, [dx, dy, dz]. */
  dimensions: ArrayLike<number>;
}

/** N boxes as parallel flat arrays: centers 3N, rotations 9N or quaternions 4N, dimensions 3N. */
export interface BoxArray {
  centers: ArrayLike<number>;
  rotations?: ArrayLike<number>;
  quaternions?: ArrayLike<number>;
  dimensions: ArrayLike<number>;
}

export interface KernelOptions {
  /** Python interpreter to launch; defaults to $BOXMETRICS_PYTHON or "python3". */
  python?: string;
  /** Extra PYTHONPATH entry for locating the kernel package (e.g. a src/ checkout). */
  pythonPath?: string;
  /** Validity tolerance forwarded as --tol. */
  tol?: number;
}

export interface DiffPair {
  abs: number;
  squared: number;
}

export interface RotationDiff {
  euler_diff: [number, number, number];
  quaternion_distance: number;
  matrix_geodesic: number;
}

export interface MetricReport {
  boxA: string;
  boxB: string;
  iou: number;
  v2v: number;
  bbd: number;
  position_diff: DiffPair;
  size_diff: DiffPair;
  rotation: RotationDiff;
  point_iou: number | null;
  warnings: string[];
  tol: number;
  tool_version: string;
}

const ROTATION_SIZES: Record<string, number> = { matrix: 9, quaternion: 4, euler_xyz: 3 };

function checkVector(value: ArrayLike<number>, length: number, field: string): number[] {
  if (value === undefined || value === null) {
    throw new Error(`${field} is missing`);
  }
  const arr = Array.from(value, Number);
  if (arr.length !== length) {
    throw new Error(`${field} must have ${length} entries, got ${arr.length}`);
  }
  for (let i = 0; i < arr.length; i++) {
    if (!Number.isFinite(arr[i])) {
      throw new Error(`${field}[${i}] must be a finite number`);
    }
  }
  return arr;
}

function boxToRecordFields(box: Box, label: string): Record<string, unknown> {
  const center = checkVector(box.center, 3, `${label}.center`);
  const dimensions = checkVector(box.dimensions, 3, `${label}.dimensions`);
  for (let i = 0; i < 3; i++) {
    if (dimensions[i] <= 0) {
      throw new Error(`${label}.dimensions[${i}] must be positive`);
    }
  }
  const rotation = box.rotation as Record<string, ArrayLike<number>>;
  const keys = rotation ? Object.keys(rotation) : [];
  if (keys.length !== 1 || !(keys[0] in ROTATION_SIZES)) {
    throw new Error(`${label}.rotation must carry exactly one of matrix, quaternion, euler_xyz`);
  }
  const key = keys[0];
  const values = checkVector(rotation[key], ROTATION_SIZES[key], `${label}.rotation.${key}`);
  return { center, rotation: { [key]: values }, dimensions };
}

function boxArrayToBoxes(arr: BoxArray, label: string): Box[] {
  const centers = Array.from(arr.centers ?? [], Number);
  const dimensions = Array.from(arr.dimensions ?? [], Number);
  if (centers.length % 3 !== 0) {
    throw new Error(`${label}.centers length must be a multiple of 3`);
  }
  const n = centers.length / 3;
  if (dimensions.length !== 3 * n) {
    throw new Error(`${label}.dimensions length must be 3N = ${3 * n}, got ${dimensions.length}`);
  }
  const hasMatrices = arr.rotations !== undefined;
  const hasQuaternions = arr.quaternions !== undefined;
  if (hasMatrices === hasQuaternions) {
    throw new Error(`${label} must carry exactly one of rotations (9N) or quaternions (4N)`);
  }
  const stride = hasMatrices ? 9 : 4;
  const rot = Array.from((hasMatrices ? arr.rotations : arr.quaternions)!, Number);
  if (rot.length !== stride * n) {
    throw new Error(
      `${label}.${hasMatrices ? "rotations" : "quaternions"} length must be ${stride}N = ${stride * n}, got ${rot.length}`
    );
  }
  const boxes: Box[] = [];
  for (let i = 0; i < n; i++) {
    const slice = rot.slice(i * stride, (i + 1) * stride);
    boxes.push({
      center: centers.slice(i * 3, (i + 1) * 3),
      rotation: hasMatrices ? { matrix: slice } : { quaternion: slice },
      dimensions: dimensions.slice(i * 3, (i + 1) * 3),
    });
  }
  return boxes;
}

interface BatchJob {
  boxA: string;
  boxB: string;
  cloud?: string;
}

function runKernelBatch(
  records: Record<string, unknown>[],
  jobs: BatchJob[],
  options: KernelOptions,
  metrics?: string
): Record<string, any>[] {
  const workdir = fs.mkdtempSync(path.join(os.tmpdir(), "boxmetrics-"));
  try {
    const boxesPath = path.join(workdir, "boxes.jsonl");
    const pairsPath = path.join(workdir, "pairs.jsonl");
    fs.writeFileSync(boxesPath, records.map((r) => JSON.stringify(r)).join("\n") + "\n");
    fs.writeFileSync(pairsPath, jobs.map((j) => JSON.stringify(j)).join("\n") + (jobs.length ? "\n" : ""));

    const python = options.python ?? process.env.BOXMETRICS_PYTHON ?? "python3";
    const args = ["-m", "boxmetrics", "batch", boxesPath, pairsPath, "--output", "-"];
    if (options.tol !== undefined) {
      args.push("--tol", String(options.tol));
    }
    if (metrics !== undefined) {
      args.push("--metrics", metrics);
    }
    const env = { ...process.env };
    const extra = options.pythonPath ?? process.env.BOXMETRICS_PYTHONPATH;
    if (extra) {
      env.PYTHONPATH = env.PYTHONPATH ? `${extra}${path.delimiter}${env.PYTHONPATH}` : extra;
    }
    const result = spawnSync(python, args, { env, encoding: "utf8", maxBuffer: 1 << 28 });
    if (result.error) {
      throw new Error(`failed to launch kernel: ${result.error.message}`);
    }
    if (result.status !== 0 && result.status !== 1) {
      throw new Error(`kernel exited with status ${result.status}: ${result.stderr.trim()}`);
    }
    const lines = result.stdout.split("\n").filter((line) => line.length > 0);
    const parsed = lines.map((line) => JSON.parse(line) as Record<string, any>);
    const summary = parsed.pop();
    if (summary === undefined || summary.summary === undefined) {
      throw new Error("kernel output ended without a summary line");
    }
    for (const row of parsed) {
      if (typeof row.error === "string") {
        throw new Error(`job ${row.job} (${row.boxA} vs ${row.boxB}): ${row.error}`);
      }
    }
    return parsed;
  } finally {
    fs.rmSync(workdir, { recursive: true, force: true });
  }
}

/** Full metric report for one pair; warnings arrive as data, not exceptions. */
export function report(boxA: Box, boxB: Box, cloudPath?: string, options: KernelOptions = {}): MetricReport {
  const records = [
    { id: "a", ...boxToRecordFields(boxA, "boxA") },
    { id: "b", ...boxToRecordFields(boxB, "boxB") },
  ];
  const job: BatchJob = { boxA: "a", boxB: "b" };
  if (cloudPath !== undefined) {
    job.cloud = cloudPath;
  }
  const rows = runKernelBatch(records, [job], options);
  const { job: _job, ...rest } = rows[0];
  return rest as MetricReport;
}

/** Volumetric intersection over union, in [0, 1]. */
export function iou(boxA: Box, boxB: Box, options: KernelOptions = {}): number {
  return report(boxA, boxB, undefined, options).iou;
}

/** Shortest hull-to-hull distance; 0 whenever the boxes overlap. */
export function v2v(boxA: Box, boxB: Box, options: KernelOptions = {}): number {
  return report(boxA, boxB, undefined, options).v2v;
}

/** Disparity score 1 - iou + v2v. */
export function bbd(boxA: Box, boxB: Box, options: KernelOptions = {}): number {
  return report(boxA, boxB, undefined, options).bbd;
}

/** Elementwise IoU of two equal-length box arrays; order matches the input. */
export function batch_iou(boxesA: BoxArray, boxesB: BoxArray, options: KernelOptions = {}): Float64Array {
  const a = boxArrayToBoxes(boxesA, "boxesA");
  const b = boxArrayToBoxes(boxesB, "boxesB");
  if (a.length !== b.length) {
    throw new Error(`length mismatch: boxesA has ${a.length} boxes, boxesB has ${b.length}`);
  }
  const records: Record<string, unknown>[] = [];
  const jobs: BatchJob[] = [];
  for (let i = 0; i < a.length; i++) {
    records.push({ id: `a${i}`, ...boxToRecordFields(a[i], `boxesA[${i}]`) });
    records.push({ id: `b${i}`, ...boxToRecordFields(b[i], `boxesB[${i}]`) });
    jobs.push({ boxA: `a${i}`, boxB: `b${i}` });
  }
  const rows = runKernelBatch(records, jobs, options, "iou");
  const out = new Float64Array(a.length);
  for (const row of rows) {
    out[row.job] = row.iou;
  }
  return out;
}
