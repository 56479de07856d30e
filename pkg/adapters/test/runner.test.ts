import { existsSync, readFileSync } from 'node:fs';
import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import { runAdapter } from '../src/runner.js';
import { handleDepthJob } from '../src/handlers.js';
import { makeJob, readResponse, tinyPng } from './helpers.js';

describe('runner', () => {
  it('prints the manifest and exits 0 with --manifest', async () => {
    const lines: string[] = [];
    const original = process.stdout.write.bind(process.stdout);
    (process.stdout.write as unknown) = (chunk: string) => {
      lines.push(String(chunk));
      return true;
    };
    try {
      const code = await runAdapter('depth', async () => {}, ['--manifest']);
      expect(code).toBe(0);
    } finally {
      (process.stdout.write as unknown) = original;
    }
    const manifest = JSON.parse(lines.join(''));
    expect(manifest.kind).toBe('depth');
    expect(manifest).toHaveProperty('model');
    expect(manifest).toHaveProperty('checkpoint_hash');
    expect(manifest).toHaveProperty('deterministic');
  });

  it('turns handler failures into an error response and exit 1', async () => {
    const jobDir = makeJob('depth', {}, { width: 2, height: 2 });
    const code = await runAdapter(
      'depth',
      (dir) =>
        handleDepthJob(dir, {
          async infer() {
            throw new Error('model exploded');
          },
        }),
      [jobDir],
    );
    expect(code).toBe(1);
    const response = readResponse(jobDir);
    expect(response.status).toBe('error');
    expect(response.message).toMatch(/lacks input image|model exploded/);
    expect((response.meta.manifest as { kind: string }).kind).toBe('depth');
  });

  it('never leaves a job without response.json on adversarial input', async () => {
    // tiny image, wrong params type: schema rejection happens before inference
    const jobDir = makeJob('depth', { image: tinyPng() }, { width: 'big' });
    const code = await runAdapter(
      'depth',
      (dir) =>
        handleDepthJob(dir, {
          async infer() {
            return { data: new Float32Array(4), convention: 'depth' as const };
          },
        }),
      [jobDir],
    );
    expect(code).toBe(1);
    expect(existsSync(join(jobDir, 'response.json'))).toBe(true);
    expect(readResponse(jobDir).status).toBe('error');
  });

  it('rejects bad usage with exit 2', async () => {
    const code = await runAdapter('depth', async () => {}, []);
    expect(code).toBe(2);
  });

  it('reports kind mismatches as protocol errors', async () => {
    const jobDir = makeJob('features', { image: tinyPng() }, {});
    const code = await runAdapter(
      'depth',
      (dir) =>
        handleDepthJob(dir, {
          async infer() {
            return { data: new Float32Array(1), convention: 'depth' as const };
          },
        }),
      [jobDir],
    );
    expect(code).toBe(1);
    expect(readResponse(jobDir).message).toMatch(/routed/);
  });
});
