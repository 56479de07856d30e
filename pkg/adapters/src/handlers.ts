/**
 * Kind-specific job handlers. Each validates the request, runs its
 * engine, checks the output against the kind's shape contract, and
 * writes outputs/ + response.json.
 */

import { buildManifest } from './manifest.js';
import {
  type QAItem,
  paramSchemas,
  readInputBytes,
  readRequest,
  writeOutputFile,
  writeResponse,
} from './protocol.js';
import { relativePose } from './pose.js';
import { encodeTensor } from './tensorfile.js';
import type {
  AestheticEngine,
  DepthEngine,
  FeatureEngine,
  JudgeEngine,
  NvsEngine,
  PerceptualEngine,
  QAGenEngine,
  VqaEngine,
} from './engines.js';

function meta(kind: string, extra: Record<string, unknown> = {}) {
  return { manifest: buildManifest(kind), ...extra };
}

export async function handleDepthJob(jobDir: string, engine: DepthEngine): Promise<void> {
  const request = readRequest(jobDir, 'depth');
  const { width, height } = paramSchemas.depth.parse(request.params);
  const image = readInputBytes(jobDir, request, 'image');
  const result = await engine.infer(image, width, height);
  if (result.data.length !== width * height) {
    throw new Error(`depth payload ${result.data.length} != ${height}x${width}`);
  }
  const rel = writeOutputFile(
    jobDir,
    'outputs/depth.etns',
    encodeTensor({ dtype: 'float32', dims: [height, width], data: result.data }),
  );
  writeResponse(jobDir, {
    status: 'ok',
    outputs: { depth: rel },
    meta: meta('depth', { depth_convention: result.convention }),
  });
}

export async function handleFeaturesJob(jobDir: string, engine: FeatureEngine): Promise<void> {
  const request = readRequest(jobDir, 'features');
  paramSchemas.features.parse(request.params);
  const image = readInputBytes(jobDir, request, 'image');
  const result = await engine.infer(image);
  if (result.channels <= 0 || result.data.length !== result.channels * 256 * 256) {
    throw new Error(
      `feature payload ${result.data.length} does not match ${result.channels}x256x256`,
    );
  }
  const rel = writeOutputFile(
    jobDir,
    'outputs/features.etns',
    encodeTensor({ dtype: 'float32', dims: [result.channels, 256, 256], data: result.data }),
  );
  writeResponse(jobDir, {
    status: 'ok',
    outputs: { features: rel },
    meta: meta('features', { channels: result.channels }),
  });
}

export async function handleNvsJob(jobDir: string, engine: NvsEngine): Promise<void> {
  const request = readRequest(jobDir, 'nvs');
  const p = paramSchemas.nvs.parse(request.params);
  const source = readInputBytes(jobDir, request, 'source_image');
  // the engine consumes the camera delta, not absolute rig poses
  const pose = relativePose(p.source_pose, p.target_pose);
  const png = await engine.synthesize(source, pose, p.width, p.height);
  if (png.length < 8 || png.readUInt32BE(0) !== 0x89504e47) {
    throw new Error('nvs engine did not return a PNG');
  }
  const rel = writeOutputFile(jobDir, 'outputs/image.png', png);
  writeResponse(jobDir, {
    status: 'ok',
    outputs: { image: rel },
    meta: meta('nvs', { relative_pose: pose }),
  });
}

export async function handlePerceptualJob(jobDir: string, engine: PerceptualEngine): Promise<void> {
  const request = readRequest(jobDir, 'perceptual');
  const a = readInputBytes(jobDir, request, 'image_a');
  const b = readInputBytes(jobDir, request, 'image_b');
  const raw = await engine.distance(a, b);
  if (!Number.isFinite(raw)) throw new Error(`perceptual engine returned ${raw}`);
  // contract: distance lands in [0, 1]; rescaling is this adapter's job
  const distance = Math.min(1, Math.max(0, raw));
  writeResponse(jobDir, {
    status: 'ok',
    outputs: { distance },
    meta: meta('perceptual', { raw_distance: raw }),
  });
}

function validateQA(items: QAItem[]): void {
  if (!Array.isArray(items) || items.length === 0) {
    throw new Error('question generation produced no items');
  }
  for (const item of items) {
    if (!item.question || !Array.isArray(item.choices) || item.choices.length < 2) {
      throw new Error(`malformed QA item: ${JSON.stringify(item)}`);
    }
    if (!item.choices.includes(item.gold)) {
      throw new Error(`gold answer ${item.gold} not among choices for: ${item.question}`);
    }
  }
}

export async function handleQAGenJob(jobDir: string, engine: QAGenEngine): Promise<void> {
  const request = readRequest(jobDir, 'qagen');
  const p = paramSchemas.qagen.parse(request.params);
  const items = await engine.generate(p.prompt, p.scene_graph);
  validateQA(items);
  writeResponse(jobDir, {
    status: 'ok',
    outputs: { qa: items },
    meta: meta('qagen'),
  });
}

function argmax(scores: number[]): number {
  let best = 0;
  for (let i = 1; i < scores.length; i++) if (scores[i] > scores[best]) best = i;
  return best;
}

export async function handleVqaJob(jobDir: string, engine: VqaEngine): Promise<void> {
  const request = readRequest(jobDir, 'vqa');
  const p = paramSchemas.vqa.parse(request.params);
  const image = readInputBytes(jobDir, request, 'image');
  const scores = await engine.scoreChoices(image, p.question, p.choices);
  if (scores.length !== p.choices.length) {
    throw new Error(`engine scored ${scores.length} of ${p.choices.length} choices`);
  }
  // answer is a member of the choice set by construction
  const answer = p.choices[argmax(scores)];
  writeResponse(jobDir, {
    status: 'ok',
    outputs: { answer },
    meta: meta('vqa', { choice_scores: scores }),
  });
}

export async function handleAestheticJob(jobDir: string, engine: AestheticEngine): Promise<void> {
  const request = readRequest(jobDir, 'aesthetic');
  paramSchemas.aesthetic.parse(request.params);
  const image = readInputBytes(jobDir, request, 'image');
  const score = await engine.score(image);
  if (!Number.isFinite(score)) throw new Error(`aesthetic engine returned ${score}`);
  writeResponse(jobDir, {
    status: 'ok',
    outputs: { score },
    meta: meta('aesthetic'),
  });
}

/** Pairwise judge: a vqa-kind job carrying two images and model ids. */
export async function handleJudgeJob(jobDir: string, engine: JudgeEngine): Promise<void> {
  const request = readRequest(jobDir, 'vqa');
  const p = paramSchemas.vqa.parse(request.params);
  const a = readInputBytes(jobDir, request, 'image_a');
  const b = readInputBytes(jobDir, request, 'image_b');
  const scores = await engine.compare(a, b, p.question);
  if (scores.length !== p.choices.length) {
    throw new Error(`judge scored ${scores.length} of ${p.choices.length} choices`);
  }
  const answer = p.choices[argmax(scores)];
  writeResponse(jobDir, {
    status: 'ok',
    outputs: { answer },
    meta: meta('judge', { choice_scores: scores }),
  });
}
