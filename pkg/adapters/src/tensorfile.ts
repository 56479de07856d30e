/**
 * Binary tensor container for exact array interchange with the engine.
 *
 * Layout (little-endian): magic "ETNS" | u32 version=1 | u8 dtype
 * (1 = float32, 2 = uint8) | u32 ndim | ndim x u64 dims | row-major payload.
 */

export type TensorDtype = 'float32' | 'uint8';

export interface Tensor {
  dtype: TensorDtype;
  dims: number[];
  /** Row-major payload. */
  data: Float32Array | Uint8Array;
}

const MAGIC = Buffer.from('ETNS', 'ascii');
const VERSION = 1;
const DTYPE_CODE: Record<TensorDtype, number> = { float32: 1, uint8: 2 };

export function encodeTensor(tensor: Tensor): Buffer {
  const { dtype, dims, data } = tensor;
  if (dims.length === 0 || dims.some((d) => d <= 0 || !Number.isInteger(d))) {
    throw new Error(`tensor dims must be positive integers, got ${JSON.stringify(dims)}`);
  }
  const count = dims.reduce((a, b) => a * b, 1);
  if (count !== data.length) {
    throw new Error(`payload length ${data.length} does not match dims ${JSON.stringify(dims)}`);
  }
  const itemSize = dtype === 'float32' ? 4 : 1;
  const header = Buffer.alloc(4 + 4 + 1 + 4 + 8 * dims.length);
  MAGIC.copy(header, 0);
  header.writeUInt32LE(VERSION, 4);
  header.writeUInt8(DTYPE_CODE[dtype], 8);
  header.writeUInt32LE(dims.length, 9);
  dims.forEach((d, i) => header.writeBigUInt64LE(BigInt(d), 13 + 8 * i));
  const payload = Buffer.alloc(count * itemSize);
  if (dtype === 'float32') {
    const view = data as Float32Array;
    for (let i = 0; i < count; i++) payload.writeFloatLE(view[i], i * 4);
  } else {
    payload.set(data as Uint8Array);
  }
  return Buffer.concat([header, payload]);
}

export function decodeTensor(raw: Buffer): Tensor {
  if (raw.length < 13 || !raw.subarray(0, 4).equals(MAGIC)) {
    throw new Error('bad magic');
  }
  const version = raw.readUInt32LE(4);
  if (version !== VERSION) throw new Error(`bad version: ${version}`);
  const code = raw.readUInt8(8);
  const dtype: TensorDtype | undefined =
    code === 1 ? 'float32' : code === 2 ? 'uint8' : undefined;
  if (!dtype) throw new Error(`bad dtype code: ${code}`);
  const ndim = raw.readUInt32LE(9);
  const headerEnd = 13 + 8 * ndim;
  if (ndim === 0 || raw.length < headerEnd) throw new Error('bad header');
  const dims: number[] = [];
  for (let i = 0; i < ndim; i++) dims.push(Number(raw.readBigUInt64LE(13 + 8 * i)));
  const count = dims.reduce((a, b) => a * b, 1);
  const itemSize = dtype === 'float32' ? 4 : 1;
  if (raw.length < headerEnd + count * itemSize) throw new Error('short payload');
  if (dtype === 'float32') {
    const out = new Float32Array(count);
    for (let i = 0; i < count; i++) out[i] = raw.readFloatLE(headerEnd + i * 4);
    return { dtype, dims, data: out };
  }
  return {
    dtype,
    dims,
    data: new Uint8Array(raw.subarray(headerEnd, headerEnd + count)),
  };
}
