/** Base58Check: version byte + payload + 4-byte double-SHA-256 checksum. */

import { sha256 } from './sha256.js';

const ALPHABET = '123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz';

export function b58encode(raw: Uint8Array): string {
  let value = 0n;
  for (const byte of raw) value = value * 256n + BigInt(byte);
  let encoded = '';
  while (value > 0n) {
    encoded = ALPHABET[Number(value % 58n)] + encoded;
    value /= 58n;
  }
  for (const byte of raw) {
    if (byte !== 0) break;
    encoded = '1' + encoded; // leading zero bytes keep their own symbol
  }
  return encoded;
}

export function b58decode(text: string): Uint8Array {
  let value = 0n;
  for (const ch of text) {
    const index = ALPHABET.indexOf(ch);
    if (index < 0) throw new Error(`invalid base58 character: ${ch}`);
    value = value * 58n + BigInt(index);
  }
  const bytes: number[] = [];
  while (value > 0n) {
    bytes.unshift(Number(value % 256n));
    value /= 256n;
  }
  for (const ch of text) {
    if (ch !== '1') break;
    bytes.unshift(0);
  }
  return new Uint8Array(bytes);
}

function checksum(raw: Uint8Array): Uint8Array {
  return sha256(sha256(raw)).subarray(0, 4);
}

export function base58checkEncode(version: number, payload: Uint8Array): string {
  const body = new Uint8Array(1 + payload.length);
  body[0] = version;
  body.set(payload, 1);
  const full = new Uint8Array(body.length + 4);
  full.set(body, 0);
  full.set(checksum(body), body.length);
  return b58encode(full);
}

export function base58checkDecode(text: string): { version: number; payload: Uint8Array } {
  const raw = b58decode(text);
  if (raw.length < 5) throw new Error('base58check string too short');
  const body = raw.subarray(0, raw.length - 4);
  const expected = checksum(body);
  const actual = raw.subarray(raw.length - 4);
  for (let i = 0; i < 4; i++) {
    if (expected[i] !== actual[i]) throw new Error('base58check checksum mismatch');
  }
  return { version: body[0], payload: body.slice(1) };
}
