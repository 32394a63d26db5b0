import { describe, expect, it } from 'vitest';
import { Sha256, sha256 } from '../src/sha256.js';
import { bytesToHex } from '../src/hex.js';

const ascii = (text: string): Uint8Array => new TextEncoder().encode(text);
const hexOf = (data: Uint8Array): string => bytesToHex(sha256(data));

// Published known-answer vectors for SHA-256.
const VECTORS: Array<[string, string]> = [
  ['', 'e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855'],
  ['abc', 'ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad'],
  [
    'abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq',
    '248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1',
  ],
  [
    'abcdefghbcdefghicdefghijdefghijkefghijklfghijklmghijklmnhijklmno' +
      'ijklmnopjklmnopqklmnopqrlmnopqrsmnopqrstnopqrstu',
    'cf5b16a778af8380036ce59e7b0492370b249b11e8f07a51afac45037afee9d1',
  ],
  // Shared with the command-line tool's own tests.
  ['hello world\n', 'a948904f2f0f479b8f8197694b30184b0d2ed1c1cd2a1ec0fb85d299a192a447'],
];

describe('sha256 one-shot', () => {
  it.each(VECTORS)('hashes %j', (message, digest) => {
    expect(hexOf(ascii(message))).toBe(digest);
  });

  it('hashes one million "a" characters', () => {
    const data = new Uint8Array(1_000_000).fill(0x61);
    expect(hexOf(data)).toBe(
      'cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0',
    );
  });
});

describe('sha256 incremental', () => {
  it('matches the one-shot digest for every split point of a message', () => {
    const message = ascii('abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq');
    const expected = bytesToHex(sha256(message));
    for (let split = 0; split <= message.length; split++) {
      const hasher = new Sha256();
      hasher.update(message.subarray(0, split));
      hasher.update(message.subarray(split));
      expect(bytesToHex(hasher.digest())).toBe(expected);
    }
  });

  it('matches across chunk sizes that straddle the 64-byte block boundary', () => {
    const data = new Uint8Array(100_000);
    for (let i = 0; i < data.length; i++) {
      data[i] = (i * 131 + 7) & 0xff;
    }
    const expected = bytesToHex(sha256(data));
    for (const chunkSize of [1, 63, 64, 65, 4096, 65_537]) {
      const hasher = new Sha256();
      for (let offset = 0; offset < data.length; offset += chunkSize) {
        hasher.update(data.subarray(offset, offset + chunkSize));
      }
      expect(bytesToHex(hasher.digest())).toBe(expected);
    }
  });

  it('produces the empty-input digest when never updated', () => {
    expect(bytesToHex(new Sha256().digest())).toBe(
      'e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855',
    );
  });

  it('refuses updates after the digest is taken', () => {
    const hasher = new Sha256();
    hasher.digest();
    expect(() => hasher.update(ascii('more'))).toThrow();
  });

  it('agrees with the platform WebCrypto implementation on random inputs', async () => {
    for (const size of [0, 1, 55, 56, 64, 1000, 12_345]) {
      const data = new Uint8Array(size);
      for (let i = 0; i < size; i++) {
        data[i] = (i * 37 + size) & 0xff;
      }
      const platform = new Uint8Array(await crypto.subtle.digest('SHA-256', data));
      expect(bytesToHex(sha256(data))).toBe(bytesToHex(platform));
    }
  });
});
