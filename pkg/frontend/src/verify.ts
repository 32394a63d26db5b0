/**
 * In-browser proof verification.
 *
 * Recomputes every client-side step (batch membership, aggregation, address
 * derivation) locally and consults the service only for public chain state:
 * the committing transaction, its containing block header, and the tip.
 * Checks run in the same order and report the same failure wording as the
 * command-line verifier so both implementations give identical verdicts.
 */

import { ApiError, ServiceClient } from './api.js';
import { ProofBundle } from './bundle.js';
import { aggregate, deriveAddress } from './commitment.js';

export type Verdict = 'verified' | 'pending' | 'mismatch';

export interface VerifyResult {
  verdict: Verdict;
  /** Which check failed; null unless verdict is "mismatch". */
  failureDetail: string | null;
  /** Depth of the containing block; 0 when checks never reached one. */
  confirmations: number;
  /** RFC 3339 time of the containing block; null unless verified. */
  attestedTime: string | null;
}

export const DEFAULT_FINALITY_DEPTH = 5;

function mismatch(detail: string): VerifyResult {
  return { verdict: 'mismatch', failureDetail: detail, confirmations: 0, attestedTime: null };
}

export async function verifyBundle(
  client: ServiceClient,
  documentHash: string,
  bundle: ProofBundle,
  finalityDepth: number = DEFAULT_FINALITY_DEPTH,
): Promise<VerifyResult> {
  const docHash = documentHash.toLowerCase();

  if (!bundle.batch_hashes.includes(docHash)) {
    return mismatch("document hash is not in the bundle's batch hash list");
  }
  if (aggregate(bundle.batch_hashes) !== bundle.aggregated_hash) {
    return mismatch('aggregated hash does not recompute from the batch hashes');
  }
  if (deriveAddress(bundle.aggregated_hash) !== bundle.address) {
    return mismatch('address does not derive from the aggregated hash');
  }

  let tx;
  try {
    tx = await client.getTransaction(bundle.txid);
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      return mismatch('transaction is not on the chain');
    }
    throw err;
  }
  if (tx.block_hash === undefined || tx.block_height === undefined) {
    return mismatch('transaction is not on the chain');
  }
  if (tx.address !== bundle.address || tx.amount_satoshi < 1) {
    return mismatch('transaction does not pay the commitment address');
  }
  if (tx.block_hash !== bundle.block_hash) {
    return mismatch('containing block hash does not match the bundle');
  }
  if (tx.block_height !== bundle.block_height) {
    return mismatch('containing block height does not match the bundle');
  }

  const block = await client.getBlock(tx.block_hash);
  if (block.time !== bundle.block_time) {
    return mismatch('containing block time does not match the bundle');
  }

  const tip = await client.getTip();
  const confirmations = tip.height - block.height + 1;
  if (confirmations < finalityDepth) {
    return { verdict: 'pending', failureDetail: null, confirmations, attestedTime: null };
  }
  return { verdict: 'verified', failureDetail: null, confirmations, attestedTime: block.time };
}
