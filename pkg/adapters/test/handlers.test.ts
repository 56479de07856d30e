import { readFileSync } from 'node:fs';
import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import {
  handleAestheticJob,
  handleDepthJob,
  handleFeaturesJob,
  handleJudgeJob,
  handleNvsJob,
  handlePerceptualJob,
  handleQAGenJob,
  handleVqaJob,
} from '../src/handlers.js';
import { relativePose } from '../src/pose.js';
import { decodeTensor } from '../src/tensorfile.js';
import { makeJob, readResponse, tinyPng } from './helpers.js';

const POSE_A = { azimuth: 0, elevation: 15, distance: 4.2, vfov: 50 };
const POSE_B = { azimuth: 270, elevation: 15, distance: 4.2, vfov: 50 };

describe('depth adapter', () => {
  it('writes an HxW float32 tensor and echoes the convention + manifest', async () => {
    const jobDir = makeJob('depth', { image: tinyPng() }, { view_id: 0, width: 4, height: 3 });
    await handleDepthJob(jobDir, {
      async infer(_img, width, height) {
        return { data: new Float32Array(width * height).fill(2.5), convention: 'disparity' };
      },
    });
    const response = readResponse(jobDir);
    expect(response.status).toBe('ok');
    expect(response.meta.depth_convention).toBe('disparity');
    expect((response.meta.manifest as { kind: string }).kind).toBe('depth');
    const tensor = decodeTensor(readFileSync(join(jobDir, response.outputs.depth as string)));
    expect(tensor.dims).toEqual([3, 4]);
    expect((tensor.data as Float32Array)[0]).toBe(2.5);
  });

  it('rejects an engine that returns the wrong pixel count', async () => {
    const jobDir = makeJob('depth', { image: tinyPng() }, { width: 4, height: 4 });
    await expect(
      handleDepthJob(jobDir, {
        async infer() {
          return { data: new Float32Array(5), convention: 'depth' as const };
        },
      }),
    ).rejects.toThrow(/5/);
  });

  it('rejects a request missing the image input', async () => {
    const jobDir = makeJob('depth', {}, { width: 4, height: 4 });
    await expect(
      handleDepthJob(jobDir, {
        async infer() {
          return { data: new Float32Array(16), convention: 'depth' as const };
        },
      }),
    ).rejects.toThrow(/lacks input image/);
  });
});

describe('features adapter', () => {
  it('enforces the Cx256x256 contract', async () => {
    const jobDir = makeJob('features', { image: tinyPng() }, { view_id: 1 });
    await handleFeaturesJob(jobDir, {
      async infer() {
        return { channels: 2, data: new Float32Array(2 * 256 * 256).fill(0.5) };
      },
    });
    const response = readResponse(jobDir);
    expect(response.status).toBe('ok');
    expect(response.meta.channels).toBe(2);
    const tensor = decodeTensor(readFileSync(join(jobDir, response.outputs.features as string)));
    expect(tensor.dims).toEqual([2, 256, 256]);
  });

  it('rejects non-256 spatial output', async () => {
    const jobDir = makeJob('features', { image: tinyPng() }, {});
    await expect(
      handleFeaturesJob(jobDir, {
        async infer() {
          return { channels: 2, data: new Float32Array(2 * 128 * 128) };
        },
      }),
    ).rejects.toThrow(/256x256/);
  });
});

describe('nvs adapter', () => {
  it('computes the relative pose and writes the predicted PNG', async () => {
    const jobDir = makeJob(
      'nvs',
      { source_image: tinyPng() },
      { source_pose: POSE_A, target_pose: POSE_B, width: 1, height: 1 },
    );
    let seenPose: unknown;
    await handleNvsJob(jobDir, {
      async synthesize(_src, pose) {
        seenPose = pose;
        return tinyPng();
      },
    });
    const response = readResponse(jobDir);
    expect(response.status).toBe('ok');
    // 0 -> 270 wraps to -90
    expect(seenPose).toEqual({ dAzimuth: -90, dElevation: 0, dRadius: 0 });
    const png = readFileSync(join(jobDir, response.outputs.image as string));
    expect(png.readUInt32BE(0)).toBe(0x89504e47);
    expect(response.meta.relative_pose).toEqual({ dAzimuth: -90, dElevation: 0, dRadius: 0 });
  });

  it('rejects an engine that does not return a PNG', async () => {
    const jobDir = makeJob(
      'nvs',
      { source_image: tinyPng() },
      { source_pose: POSE_A, target_pose: POSE_B, width: 1, height: 1 },
    );
    await expect(
      handleNvsJob(jobDir, {
        async synthesize() {
          return Buffer.from('not a png');
        },
      }),
    ).rejects.toThrow(/PNG/);
  });
});

describe('perceptual adapter', () => {
  it('clamps the engine distance into [0, 1] and keeps the raw value', async () => {
    const jobDir = makeJob('perceptual', { image_a: tinyPng(), image_b: tinyPng() }, {});
    await handlePerceptualJob(jobDir, {
      async distance() {
        return 1.25;
      },
    });
    const response = readResponse(jobDir);
    expect(response.outputs.distance).toBe(1);
    expect(response.meta.raw_distance).toBe(1.25);
  });

  it('identical inputs may score 0', async () => {
    const jobDir = makeJob('perceptual', { image_a: tinyPng(), image_b: tinyPng() }, {});
    await handlePerceptualJob(jobDir, {
      async distance() {
        return 0.0;
      },
    });
    expect(readResponse(jobDir).outputs.distance).toBe(0);
  });
});

describe('qagen adapter', () => {
  it('validates generated items (gold among choices, >= 2 choices)', async () => {
    const jobDir = makeJob('qagen', {}, { prompt: 'a statue of a dog' });
    await handleQAGenJob(jobDir, {
      async generate(prompt) {
        expect(prompt).toBe('a statue of a dog');
        return [
          { question: 'Is there a statue?', choices: ['yes', 'no'], gold: 'yes' },
          { question: 'Is there a dog?', choices: ['yes', 'no'], gold: 'yes' },
        ];
      },
    });
    const response = readResponse(jobDir);
    expect(response.status).toBe('ok');
    expect((response.outputs.qa as unknown[]).length).toBe(2);
  });

  it('rejects malformed items and empty prompts', async () => {
    const jobDir = makeJob('qagen', {}, { prompt: 'p' });
    await expect(
      handleQAGenJob(jobDir, {
        async generate() {
          return [{ question: 'q', choices: ['only'], gold: 'only' }];
        },
      }),
    ).rejects.toThrow(/malformed/);
    const empty = makeJob('qagen', {}, { prompt: '' });
    await expect(
      handleQAGenJob(empty, {
        async generate() {
          return [];
        },
      }),
    ).rejects.toThrow();
  });
});

describe('vqa adapter', () => {
  it('answers by scoring choices, so the answer is always a choice', async () => {
    const jobDir = makeJob(
      'vqa',
      { image: tinyPng() },
      { question: 'Is there a statue?', choices: ['Yes', 'No'] },
    );
    await handleVqaJob(jobDir, {
      async scoreChoices(_img, _q, choices) {
        return choices.map((c) => (c === 'No' ? 5.0 : 1.0));
      },
    });
    const response = readResponse(jobDir);
    expect(response.outputs.answer).toBe('No');
    expect(response.meta.choice_scores).toEqual([1.0, 5.0]);
  });

  it('rejects score vectors that do not cover the choices', async () => {
    const jobDir = makeJob(
      'vqa',
      { image: tinyPng() },
      { question: 'q', choices: ['a', 'b', 'c'] },
    );
    await expect(
      handleVqaJob(jobDir, {
        async scoreChoices() {
          return [1.0];
        },
      }),
    ).rejects.toThrow(/scored 1 of 3/);
  });
});

describe('aesthetic adapter', () => {
  it('emits the raw scalar', async () => {
    const jobDir = makeJob('aesthetic', { image: tinyPng() }, { view_id: 2 });
    await handleAestheticJob(jobDir, {
      async score() {
        return -0.75;
      },
    });
    expect(readResponse(jobDir).outputs.score).toBe(-0.75);
  });

  it('rejects non-finite scores', async () => {
    const jobDir = makeJob('aesthetic', { image: tinyPng() }, {});
    await expect(
      handleAestheticJob(jobDir, {
        async score() {
          return Number.NaN;
        },
      }),
    ).rejects.toThrow(/NaN/);
  });
});

describe('pairwise judge adapter', () => {
  it('runs on the vqa contract with two images', async () => {
    const jobDir = makeJob(
      'vqa',
      { image_a: tinyPng(), image_b: tinyPng() },
      {
        question: 'Which render shows the higher-quality 3D asset?',
        choices: ['a', 'b', 'tie'],
        model_a: 'm1',
        model_b: 'm2',
      },
    );
    await handleJudgeJob(jobDir, {
      async compare() {
        return [0.2, 0.1, 0.7];
      },
    });
    expect(readResponse(jobDir).outputs.answer).toBe('tie');
  });
});

describe('pose math', () => {
  it('wraps azimuth deltas into (-180, 180]', () => {
    const at = (azimuth: number) => ({ azimuth, elevation: 0, distance: 4.2 });
    expect(relativePose(at(350), at(10)).dAzimuth).toBe(20);
    expect(relativePose(at(10), at(350)).dAzimuth).toBe(-20);
    expect(relativePose(at(0), at(180)).dAzimuth).toBe(180);
    expect(relativePose(at(0), at(270)).dAzimuth).toBe(-90);
    expect(relativePose(at(90), at(90)).dAzimuth).toBe(0);
  });

  it('passes elevation and radius deltas through', () => {
    const rel = relativePose(
      { azimuth: 0, elevation: 15, distance: 4.2 },
      { azimuth: 0, elevation: 70, distance: 3.0 },
    );
    expect(rel.dElevation).toBe(55);
    expect(rel.dRadius).toBeCloseTo(-1.2, 12);
  });
});
