import { isDigestHex } from './hex.js';

/** The service's self-contained proof record for one stamped document. */
export interface ProofBundle {
  format_version: number;
  document_hash: string;
  batch_hashes: string[];
  aggregated_hash: string;
  address: string;
  txid: string;
  block_hash: string;
  block_height: number;
  block_time: string;
  confirmations_at_export: number;
}

export function parseBundle(text: string): ProofBundle {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    throw new Error('proof bundle is not valid JSON');
  }
  if (typeof data !== 'object' || data === null || Array.isArray(data)) {
    throw new Error('proof bundle must be a JSON object');
  }
  const record = data as Record<string, unknown>;

  const digest = (field: string): string => {
    const value = record[field];
    if (typeof value !== 'string' || !isDigestHex(value)) {
      throw new Error(`proof bundle field ${field} is not a 64-hex digest`);
    }
    return value.toLowerCase();
  };
  const int = (field: string): number => {
    const value = record[field];
    if (typeof value !== 'number' || !Number.isInteger(value)) {
      throw new Error(`proof bundle field ${field} is not an integer`);
    }
    return value;
  };
  const str = (field: string): string => {
    const value = record[field];
    if (typeof value !== 'string' || value.length === 0) {
      throw new Error(`proof bundle field ${field} is not a string`);
    }
    return value;
  };

  const rawHashes = record['batch_hashes'];
  if (!Array.isArray(rawHashes) || rawHashes.length === 0) {
    throw new Error('proof bundle field batch_hashes is not a non-empty list');
  }
  const batchHashes = rawHashes.map((h, i) => {
    if (typeof h !== 'string' || !isDigestHex(h)) {
      throw new Error(`proof bundle field batch_hashes[${i}] is not a 64-hex digest`);
    }
    return h.toLowerCase();
  });

  return {
    format_version: int('format_version'),
    document_hash: digest('document_hash'),
    batch_hashes: batchHashes,
    aggregated_hash: digest('aggregated_hash'),
    address: str('address'),
    txid: digest('txid'),
    block_hash: digest('block_hash'),
    block_height: int('block_height'),
    block_time: str('block_time'),
    confirmations_at_export: int('confirmations_at_export'),
  };
}
