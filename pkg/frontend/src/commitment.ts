/**
 * The commitment derivation chain, reimplemented client-side so proofs can
 * be checked without trusting the service: document hashes -> aggregated
 * hash -> pay-to-hash address.
 */

import { base58checkEncode } from './base58.js';
import { bytesToHex, hexToBytes, isDigestHex } from './hex.js';
import { ripemd160 } from './ripemd160.js';
import { Sha256, sha256 } from './sha256.js';

export const MAINNET_VERSION = 0x00;

/** SHA-256 of the sorted, deduplicated digests' concatenated raw bytes. */
export function aggregate(hashesHex: string[]): string {
  const unique = Array.from(new Set(hashesHex.map((h) => h.toLowerCase()))).sort();
  if (unique.length === 0) throw new Error('cannot aggregate an empty hash list');
  const hasher = new Sha256();
  for (const h of unique) {
    if (!isDigestHex(h)) throw new Error(`not a 64-hex digest: ${h.slice(0, 16)}...`);
    hasher.update(hexToBytes(h));
  }
  // lowercase hex sorts in the same order as the raw bytes, so this matches
  // a byte-wise sort exactly
  return bytesToHex(hasher.digest());
}

export function hash160(data: Uint8Array): Uint8Array {
  return ripemd160(sha256(data));
}

export function deriveAddress(aggregatedHex: string, version = MAINNET_VERSION): string {
  if (!isDigestHex(aggregatedHex)) {
    throw new Error(`not a 64-hex digest: ${aggregatedHex.slice(0, 16)}...`);
  }
  return base58checkEncode(version, hash160(hexToBytes(aggregatedHex)));
}
