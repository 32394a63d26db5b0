/**
 * RIPEMD-160, one-shot. Browsers expose no implementation at all, and the
 * commitment address derivation needs it for the 20-byte payload
 * (RIPEMD-160 of SHA-256 of the aggregated hash).
 */

// prettier-ignore
const WORD_LEFT = [
  0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,
  7, 4, 13, 1, 10, 6, 15, 3, 12, 0, 9, 5, 2, 14, 11, 8,
  3, 10, 14, 4, 9, 15, 8, 1, 2, 7, 0, 6, 13, 11, 5, 12,
  1, 9, 11, 10, 0, 8, 12, 4, 13, 3, 7, 15, 14, 5, 6, 2,
  4, 0, 5, 9, 7, 12, 2, 10, 14, 1, 3, 8, 11, 6, 15, 13,
];
// prettier-ignore
const WORD_RIGHT = [
  5, 14, 7, 0, 9, 2, 11, 4, 13, 6, 15, 8, 1, 10, 3, 12,
  6, 11, 3, 7, 0, 13, 5, 10, 14, 15, 8, 12, 4, 9, 1, 2,
  15, 5, 1, 3, 7, 14, 6, 9, 11, 8, 12, 2, 10, 0, 4, 13,
  8, 6, 4, 1, 3, 11, 15, 0, 5, 12, 2, 13, 9, 7, 10, 14,
  12, 15, 10, 4, 1, 5, 8, 7, 6, 2, 13, 14, 0, 3, 9, 11,
];
// prettier-ignore
const SHIFT_LEFT = [
  11, 14, 15, 12, 5, 8, 7, 9, 11, 13, 14, 15, 6, 7, 9, 8,
  7, 6, 8, 13, 11, 9, 7, 15, 7, 12, 15, 9, 11, 7, 13, 12,
  11, 13, 6, 7, 14, 9, 13, 15, 14, 8, 13, 6, 5, 12, 7, 5,
  11, 12, 14, 15, 14, 15, 9, 8, 9, 14, 5, 6, 8, 6, 5, 12,
  9, 15, 5, 11, 6, 8, 13, 12, 5, 12, 13, 14, 11, 8, 5, 6,
];
// prettier-ignore
const SHIFT_RIGHT = [
  8, 9, 9, 11, 13, 15, 15, 5, 7, 7, 8, 11, 14, 14, 12, 6,
  9, 13, 15, 7, 12, 8, 9, 11, 7, 7, 12, 7, 6, 15, 13, 11,
  9, 7, 15, 11, 8, 6, 6, 14, 12, 13, 5, 14, 13, 13, 7, 5,
  15, 5, 8, 11, 14, 14, 6, 14, 6, 9, 12, 9, 12, 5, 15, 8,
  8, 5, 12, 9, 12, 5, 14, 6, 8, 13, 6, 5, 15, 13, 11, 11,
];
const K_LEFT = [0x00000000, 0x5a827999, 0x6ed9eba1, 0x8f1bbcdc, 0xa953fd4e];
const K_RIGHT = [0x50a28be6, 0x5c4dd124, 0x6d703ef3, 0x7a6d76e9, 0x00000000];

function rol(x: number, n: number): number {
  return ((x << n) | (x >>> (32 - n))) >>> 0;
}

function f(round: number, x: number, y: number, z: number): number {
  switch (round) {
    case 0: return (x ^ y ^ z) >>> 0;
    case 1: return ((x & y) | (~x & z)) >>> 0;
    case 2: return ((x | ~y) ^ z) >>> 0;
    case 3: return ((x & z) | (y & ~z)) >>> 0;
    default: return (x ^ (y | ~z)) >>> 0;
  }
}

function compress(state: Uint32Array, block: Uint8Array, offset: number): void {
  const x = new Uint32Array(16);
  for (let i = 0; i < 16; i++) {
    const j = offset + 4 * i;
    x[i] = (block[j] | (block[j + 1] << 8) | (block[j + 2] << 16) | (block[j + 3] << 24)) >>> 0;
  }

  let [al, bl, cl, dl, el] = state;
  let [ar, br, cr, dr, er] = state;

  for (let j = 0; j < 80; j++) {
    const round = j >> 4;
    let t = rol((al + f(round, bl, cl, dl) + x[WORD_LEFT[j]] + K_LEFT[round]) >>> 0, SHIFT_LEFT[j]);
    t = (t + el) >>> 0;
    al = el; el = dl; dl = rol(cl, 10); cl = bl; bl = t;

    t = rol((ar + f(4 - round, br, cr, dr) + x[WORD_RIGHT[j]] + K_RIGHT[round]) >>> 0, SHIFT_RIGHT[j]);
    t = (t + er) >>> 0;
    ar = er; er = dr; dr = rol(cr, 10); cr = br; br = t;
  }

  const t = (state[1] + cl + dr) >>> 0;
  state[1] = (state[2] + dl + er) >>> 0;
  state[2] = (state[3] + el + ar) >>> 0;
  state[3] = (state[4] + al + br) >>> 0;
  state[4] = (state[0] + bl + cr) >>> 0;
  state[0] = t;
}

export function ripemd160(data: Uint8Array): Uint8Array {
  const state = new Uint32Array([0x67452301, 0xefcdab89, 0x98badcfe, 0x10325476, 0xc3d2e1f0]);

  // md-style padding with a little-endian bit length
  const padLength = (data.length % 64 < 56 ? 56 : 120) - (data.length % 64);
  const message = new Uint8Array(data.length + padLength + 8);
  message.set(data, 0);
  message[data.length] = 0x80;
  const view = new DataView(message.buffer);
  view.setUint32(message.length - 8, (data.length * 8) >>> 0, true);
  view.setUint32(message.length - 4, Math.floor(data.length / 0x20000000), true);

  for (let offset = 0; offset < message.length; offset += 64) {
    compress(state, message, offset);
  }

  const out = new Uint8Array(20);
  const outView = new DataView(out.buffer);
  for (let i = 0; i < 5; i++) outView.setUint32(4 * i, state[i], true);
  return out;
}
