/**
 * The engine-side job protocol, adapter view.
 *
 * One job = one directory holding request.json and an inputs/ tree; the
 * adapter writes outputs/ files plus response.json and exits. Input and
 * output values that are job-relative paths start with "inputs/" or
 * "outputs/"; anything else is a literal.
 */

import { mkdirSync, readFileSync, writeFileSync } from 'node:fs';
import { join } from 'node:path';
import { z } from 'zod';

export const KINDS = [
  'depth',
  'features',
  'nvs',
  'perceptual',
  'qagen',
  'vqa',
  'aesthetic',
] as const;
export type Kind = (typeof KINDS)[number];

const poseSchema = z.object({
  azimuth: z.number(),
  elevation: z.number(),
  distance: z.number(),
  vfov: z.number().optional(),
});
export type Pose = z.infer<typeof poseSchema>;

const requestSchema = z.object({
  kind: z.enum(KINDS),
  inputs: z.record(z.string(), z.string()).default({}),
  params: z.record(z.string(), z.unknown()).default({}),
});
export type JobRequest = z.infer<typeof requestSchema>;

/** Kind-specific parameter schemas, validated before any inference runs. */
export const paramSchemas = {
  depth: z.object({ view_id: z.number().optional(), width: z.number().int().positive(), height: z.number().int().positive() }),
  features: z.object({ view_id: z.number().optional(), width: z.number().optional(), height: z.number().optional() }),
  nvs: z.object({
    source_pose: poseSchema,
    target_pose: poseSchema,
    width: z.number().int().positive(),
    height: z.number().int().positive(),
  }),
  perceptual: z.object({}).loose(),
  qagen: z.object({ prompt: z.string().min(1), scene_graph: z.unknown().optional() }),
  vqa: z.object({ question: z.string().min(1), choices: z.array(z.string()).min(2) }),
  aesthetic: z.object({ view_id: z.number().optional() }),
} as const;

export interface QAItem {
  question: string;
  choices: string[];
  gold: string;
}

export function readRequest(jobDir: string, expectedKind: Kind): JobRequest {
  const raw = readFileSync(join(jobDir, 'request.json'), 'utf-8');
  const request = requestSchema.parse(JSON.parse(raw));
  if (request.kind !== expectedKind) {
    throw new Error(`request kind ${request.kind} routed to ${expectedKind} adapter`);
  }
  return request;
}

export function inputPath(jobDir: string, request: JobRequest, name: string): string {
  const value = request.inputs[name];
  if (value === undefined) throw new Error(`request lacks input ${name}`);
  if (!value.startsWith('inputs/')) {
    throw new Error(`input ${name} is a literal, expected a file reference`);
  }
  return join(jobDir, value);
}

export function readInputBytes(jobDir: string, request: JobRequest, name: string): Buffer {
  return readFileSync(inputPath(jobDir, request, name));
}

export interface JobResponse {
  status: 'ok' | 'error';
  message?: string;
  outputs?: Record<string, unknown>;
  meta?: Record<string, unknown>;
}

export function writeResponse(jobDir: string, response: JobResponse): void {
  const payload = {
    status: response.status,
    message: response.message ?? '',
    outputs: response.outputs ?? {},
    meta: response.meta ?? {},
  };
  writeFileSync(join(jobDir, 'response.json'), JSON.stringify(payload, null, 2));
}

export function writeOutputFile(jobDir: string, relPath: string, data: Buffer): string {
  if (!relPath.startsWith('outputs/')) {
    throw new Error(`output files must live under outputs/: ${relPath}`);
  }
  mkdirSync(join(jobDir, 'outputs'), { recursive: true });
  writeFileSync(join(jobDir, relPath), data);
  return relPath;
}
