import { describe, expect, it } from 'vitest';

import { decodeTensor, encodeTensor } from '../src/tensorfile.js';

describe('tensorfile', () => {
  it('encodes the documented header layout', () => {
    const buf = encodeTensor({
      dtype: 'float32',
      dims: [2, 3],
      data: new Float32Array(6),
    });
    // 4 magic + 4 version + 1 dtype + 4 ndim + 16 dims + 24 payload
    expect(buf.length).toBe(53);
    expect(buf.subarray(0, 4).toString('ascii')).toBe('ETNS');
    expect(buf.readUInt32LE(4)).toBe(1);
    expect(buf.readUInt8(8)).toBe(1);
    expect(buf.readUInt32LE(9)).toBe(2);
    expect(Number(buf.readBigUInt64LE(13))).toBe(2);
    expect(Number(buf.readBigUInt64LE(21))).toBe(3);
  });

  it('round-trips float32 exactly', () => {
    const data = new Float32Array([1.5, -2.25, 3.125, 0, 1e-7, 42]);
    const tensor = { dtype: 'float32' as const, dims: [2, 3], data };
    const back = decodeTensor(encodeTensor(tensor));
    expect(back.dims).toEqual([2, 3]);
    expect(Array.from(back.data as Float32Array)).toEqual(Array.from(data));
  });

  it('round-trips uint8 exactly', () => {
    const data = new Uint8Array([0, 1, 127, 255]);
    const back = decodeTensor(
      encodeTensor({ dtype: 'uint8', dims: [4], data }),
    );
    expect(back.dtype).toBe('uint8');
    expect(Array.from(back.data as Uint8Array)).toEqual([0, 1, 127, 255]);
  });

  it('rejects malformed containers', () => {
    const ok = encodeTensor({ dtype: 'float32', dims: [2, 2], data: new Float32Array(4) });
    const badMagic = Buffer.from(ok);
    badMagic[0] = 0x58;
    expect(() => decodeTensor(badMagic)).toThrow(/bad magic/);
    const badVersion = Buffer.from(ok);
    badVersion.writeUInt32LE(9, 4);
    expect(() => decodeTensor(badVersion)).toThrow(/bad version/);
    const badDtype = Buffer.from(ok);
    badDtype.writeUInt8(7, 8);
    expect(() => decodeTensor(badDtype)).toThrow(/bad dtype/);
    expect(() => decodeTensor(ok.subarray(0, ok.length - 2))).toThrow(/short payload/);
  });

  it('rejects zero or mismatched dims', () => {
    expect(() =>
      encodeTensor({ dtype: 'float32', dims: [0, 2], data: new Float32Array(0) }),
    ).toThrow(/positive/);
    expect(() =>
      encodeTensor({ dtype: 'float32', dims: [2, 2], data: new Float32Array(3) }),
    ).toThrow(/does not match/);
  });
});
