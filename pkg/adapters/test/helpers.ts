import { mkdirSync, mkdtempSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { deflateSync } from 'node:zlib';

/** Materialize a job directory the way the engine does. */
export function makeJob(
  kind: string,
  inputs: Record<string, Buffer | string>,
  params: Record<string, unknown>,
): string {
  const jobDir = mkdtempSync(join(tmpdir(), 'eval3d-job-'));
  mkdirSync(join(jobDir, 'inputs'));
  mkdirSync(join(jobDir, 'outputs'));
  const inputRefs: Record<string, string> = {};
  for (const [name, value] of Object.entries(inputs)) {
    if (Buffer.isBuffer(value)) {
      const ext = value.subarray(0, 4).equals(Buffer.from('ETNS')) ? 'etns' : 'png';
      const rel = `inputs/${name}.${ext}`;
      writeFileSync(join(jobDir, rel), value);
      inputRefs[name] = rel;
    } else {
      inputRefs[name] = value;
    }
  }
  writeFileSync(
    join(jobDir, 'request.json'),
    JSON.stringify({ kind, inputs: inputRefs, params }, null, 2),
  );
  return jobDir;
}

export function readResponse(jobDir: string): {
  status: string;
  message: string;
  outputs: Record<string, unknown>;
  meta: Record<string, unknown>;
} {
  return JSON.parse(readFileSync(join(jobDir, 'response.json'), 'utf-8'));
}

/** Minimal valid 1x1 gray PNG (enough for adapters, which treat images
 * as opaque bytes). */
export function tinyPng(): Buffer {
  const signature = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
  const chunk = (type: string, data: Buffer) => {
    const len = Buffer.alloc(4);
    len.writeUInt32BE(data.length, 0);
    const typed = Buffer.concat([Buffer.from(type, 'ascii'), data]);
    const crcBuf = Buffer.alloc(4);
    crcBuf.writeUInt32BE(crc32(typed) >>> 0, 0);
    return Buffer.concat([len, typed, crcBuf]);
  };
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(1, 0); // width
  ihdr.writeUInt32BE(1, 4); // height
  ihdr[8] = 8; // bit depth
  ihdr[9] = 0; // grayscale
  const idat = deflateSync(Buffer.from([0, 128])); // filter 0 + one pixel
  return Buffer.concat([
    signature,
    chunk('IHDR', ihdr),
    chunk('IDAT', idat),
    chunk('IEND', Buffer.alloc(0)),
  ]);
}

let crcTable: number[] | undefined;
function crc32(buf: Buffer): number {
  if (!crcTable) {
    crcTable = [];
    for (let n = 0; n < 256; n++) {
      let c = n;
      for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
      crcTable[n] = c >>> 0;
    }
  }
  let crc = 0xffffffff;
  for (const byte of buf) crc = crcTable[(crc ^ byte) & 0xff] ^ (crc >>> 8);
  return (crc ^ 0xffffffff) >>> 0;
}
