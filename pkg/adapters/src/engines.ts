/**
 * Model engines: the inference half of each adapter, behind an interface
 * so protocol conformance tests run without weights.
 *
 * The default engine POSTs JSON to an inference endpoint (images as
 * base64 PNG, tensors returned as base64 little-endian float32). Point
 * each adapter at its model server with EVAL3D_<KIND>_ENDPOINT or a
 * shared EVAL3D_ADAPTER_ENDPOINT; see README for the wire format.
 */

import type { QAItem } from './protocol.js';
import type { RelativePose } from './pose.js';

export interface DepthResult {
  /** Row-major H x W relative depth or disparity. */
  data: Float32Array;
  convention: 'depth' | 'disparity';
}

export interface FeatureResult {
  channels: number;
  /** Row-major C x 256 x 256. */
  data: Float32Array;
}

export interface DepthEngine {
  infer(imagePng: Buffer, width: number, height: number): Promise<DepthResult>;
}

export interface FeatureEngine {
  infer(imagePng: Buffer): Promise<FeatureResult>;
}

export interface NvsEngine {
  synthesize(sourcePng: Buffer, pose: RelativePose, width: number, height: number): Promise<Buffer>;
}

export interface PerceptualEngine {
  distance(aPng: Buffer, bPng: Buffer): Promise<number>;
}

export interface QAGenEngine {
  generate(prompt: string, sceneGraph?: unknown): Promise<QAItem[]>;
}

export interface VqaEngine {
  /** Score each candidate answer; the adapter takes the argmax so the
   * chosen answer is a choice by construction. */
  scoreChoices(imagePng: Buffer, question: string, choices: string[]): Promise<number[]>;
}

export interface AestheticEngine {
  score(imagePng: Buffer): Promise<number>;
}

export interface JudgeEngine {
  /** Scores for ["a", "b", "tie"]. */
  compare(aPng: Buffer, bPng: Buffer, question: string): Promise<number[]>;
}

export function endpointFor(kind: string): string {
  const specific = process.env[`EVAL3D_${kind.toUpperCase()}_ENDPOINT`];
  const shared = process.env.EVAL3D_ADAPTER_ENDPOINT;
  const base = specific ?? (shared ? `${shared.replace(/\/$/, '')}/${kind}` : undefined);
  if (!base) {
    throw new Error(
      `no inference endpoint configured for ${kind}: set EVAL3D_${kind.toUpperCase()}_ENDPOINT`,
    );
  }
  return base;
}

export async function postJson<T>(url: string, body: unknown): Promise<T> {
  const res = await fetch(url, {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify(body),
  });
  if (!res.ok) {
    const text = await res.text().catch(() => '');
    throw new Error(`endpoint ${url} returned ${res.status}: ${text.slice(0, 500)}`);
  }
  return (await res.json()) as T;
}

export function decodeF32Base64(b64: string): Float32Array {
  const buf = Buffer.from(b64, 'base64');
  const out = new Float32Array(buf.length / 4);
  for (let i = 0; i < out.length; i++) out[i] = buf.readFloatLE(i * 4);
  return out;
}

export class HttpDepthEngine implements DepthEngine {
  constructor(private url = endpointFor('depth')) {}
  async infer(imagePng: Buffer, width: number, height: number): Promise<DepthResult> {
    const reply = await postJson<{ depth_b64: string; convention?: string }>(this.url, {
      image_png_b64: imagePng.toString('base64'),
      width,
      height,
    });
    const data = decodeF32Base64(reply.depth_b64);
    if (data.length !== width * height) {
      throw new Error(`endpoint depth has ${data.length} values, expected ${width * height}`);
    }
    const convention = reply.convention === 'depth' ? 'depth' : 'disparity';
    return { data, convention };
  }
}

export class HttpFeatureEngine implements FeatureEngine {
  constructor(private url = endpointFor('features')) {}
  async infer(imagePng: Buffer): Promise<FeatureResult> {
    const reply = await postJson<{ channels: number; features_b64: string }>(this.url, {
      image_png_b64: imagePng.toString('base64'),
      resolution: 256,
    });
    const data = decodeF32Base64(reply.features_b64);
    if (data.length !== reply.channels * 256 * 256) {
      throw new Error(
        `endpoint features have ${data.length} values, expected ${reply.channels}x256x256`,
      );
    }
    return { channels: reply.channels, data };
  }
}

export class HttpNvsEngine implements NvsEngine {
  constructor(private url = endpointFor('nvs')) {}
  async synthesize(sourcePng: Buffer, pose: RelativePose, width: number, height: number) {
    const reply = await postJson<{ image_png_b64: string }>(this.url, {
      image_png_b64: sourcePng.toString('base64'),
      d_azimuth: pose.dAzimuth,
      d_elevation: pose.dElevation,
      d_radius: pose.dRadius,
      width,
      height,
    });
    return Buffer.from(reply.image_png_b64, 'base64');
  }
}

export class HttpPerceptualEngine implements PerceptualEngine {
  constructor(private url = endpointFor('perceptual')) {}
  async distance(aPng: Buffer, bPng: Buffer): Promise<number> {
    const reply = await postJson<{ distance: number }>(this.url, {
      image_a_png_b64: aPng.toString('base64'),
      image_b_png_b64: bPng.toString('base64'),
    });
    return reply.distance;
  }
}

export class HttpQAGenEngine implements QAGenEngine {
  constructor(private url = endpointFor('qagen')) {}
  async generate(prompt: string, sceneGraph?: unknown): Promise<QAItem[]> {
    const reply = await postJson<{ qa: QAItem[] }>(this.url, {
      prompt,
      scene_graph: sceneGraph ?? null,
    });
    return reply.qa;
  }
}

export class HttpVqaEngine implements VqaEngine {
  constructor(private url = endpointFor('vqa')) {}
  async scoreChoices(imagePng: Buffer, question: string, choices: string[]): Promise<number[]> {
    const reply = await postJson<{ scores: number[] }>(this.url, {
      image_png_b64: imagePng.toString('base64'),
      question,
      choices,
    });
    return reply.scores;
  }
}

export class HttpAestheticEngine implements AestheticEngine {
  constructor(private url = endpointFor('aesthetic')) {}
  async score(imagePng: Buffer): Promise<number> {
    const reply = await postJson<{ score: number }>(this.url, {
      image_png_b64: imagePng.toString('base64'),
    });
    return reply.score;
  }
}

export class HttpJudgeEngine implements JudgeEngine {
  constructor(private url = endpointFor('judge')) {}
  async compare(aPng: Buffer, bPng: Buffer, question: string): Promise<number[]> {
    const reply = await postJson<{ scores: number[] }>(this.url, {
      image_a_png_b64: aPng.toString('base64'),
      image_b_png_b64: bPng.toString('base64'),
      question,
    });
    return reply.scores;
  }
}
