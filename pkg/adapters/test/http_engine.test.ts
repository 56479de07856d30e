import { createServer, type Server } from 'node:http';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { HttpDepthEngine, HttpVqaEngine, decodeF32Base64 } from '../src/engines.js';
import { tinyPng } from './helpers.js';

let server: Server;
let base: string;

beforeAll(async () => {
  server = createServer((req, res) => {
    let body = '';
    req.on('data', (chunk) => (body += chunk));
    req.on('end', () => {
      const payload = JSON.parse(body);
      if (req.url === '/depth') {
        const { width, height } = payload;
        const data = Buffer.alloc(width * height * 4);
        for (let i = 0; i < width * height; i++) data.writeFloatLE(i * 0.5, i * 4);
        res.setHeader('content-type', 'application/json');
        res.end(
          JSON.stringify({ depth_b64: data.toString('base64'), convention: 'disparity' }),
        );
      } else if (req.url === '/vqa') {
        const scores = (payload.choices as string[]).map((c: string) => c.length);
        res.setHeader('content-type', 'application/json');
        res.end(JSON.stringify({ scores }));
      } else if (req.url === '/boom') {
        res.statusCode = 500;
        res.end('kaput');
      } else {
        res.statusCode = 404;
        res.end();
      }
    });
  });
  await new Promise<void>((resolve) => server.listen(0, '127.0.0.1', resolve));
  const address = server.address();
  if (address === null || typeof address === 'string') throw new Error('no port');
  base = `http://127.0.0.1:${address.port}`;
});

afterAll(() => {
  server.close();
});

describe('http engines', () => {
  it('depth engine round-trips base64 float32 through a live endpoint', async () => {
    const engine = new HttpDepthEngine(`${base}/depth`);
    const result = await engine.infer(tinyPng(), 3, 2);
    expect(result.convention).toBe('disparity');
    expect(Array.from(result.data)).toEqual([0, 0.5, 1, 1.5, 2, 2.5]);
  });

  it('vqa engine returns one score per choice', async () => {
    const engine = new HttpVqaEngine(`${base}/vqa`);
    const scores = await engine.scoreChoices(tinyPng(), 'q', ['aa', 'b', 'cccc']);
    expect(scores).toEqual([2, 1, 4]);
  });

  it('surfaces HTTP failures with the response text', async () => {
    const engine = new HttpDepthEngine(`${base}/boom`);
    await expect(engine.infer(tinyPng(), 2, 2)).rejects.toThrow(/500.*kaput/s);
  });

  it('decodeF32Base64 is exact', () => {
    const buf = Buffer.alloc(8);
    buf.writeFloatLE(1.25, 0);
    buf.writeFloatLE(-3.5, 4);
    expect(Array.from(decodeF32Base64(buf.toString('base64')))).toEqual([1.25, -3.5]);
  });
});
