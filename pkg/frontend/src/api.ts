/**
 * Thin HTTP client for the timestamping service's versioned JSON interface.
 *
 * The fetch function is injectable so tests can observe exactly which
 * requests leave the client and what their bodies contain.
 */

export type FetchFn = (url: string, init?: RequestInit) => Promise<Response>;

export interface StampReceipt {
  hash: string;
  status: string;
  window_id: number;
  window_closes_at: string;
  received_at: string;
  priority: boolean;
}

export interface StampStatus {
  hash: string;
  status: 'pending' | 'committed' | 'final';
  finality_depth: number;
  window_id?: number;
  window_closes_at?: string;
  aggregated_hash?: string;
  address?: string;
  txid?: string;
  block_hash?: string;
  block_height?: number;
  block_time?: string;
  confirmations?: number;
}

export interface BlockHeader {
  height: number;
  block_hash: string;
  prev_hash: string;
  merkle_root: string;
  timestamp: number;
  time: string;
  difficulty_bits: number;
  nonce: number;
  tx_count: number;
}

export interface TransactionInfo {
  txid: string;
  address: string;
  amount_satoshi: number;
  fee_satoshi: number;
  confirmations: number;
  block_hash?: string;
  block_height?: number;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, detail: string) {
    super(detail);
    this.name = 'ApiError';
    this.status = status;
    this.code = code;
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) {
    return;
  }
  let code = 'http-error';
  let detail = `request failed with HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    if (typeof body.error === 'string') {
      code = body.error;
    }
    if (typeof body.detail === 'string') {
      detail = body.detail;
    }
  } catch {
    // Non-JSON error body; keep the generic message.
  }
  throw new ApiError(response.status, code, detail);
}

export class ServiceClient {
  readonly baseUrl: string;
  private readonly fetchFn: FetchFn;

  constructor(baseUrl: string, fetchFn?: FetchFn) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
    this.fetchFn = fetchFn ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: 'GET',
      headers: { accept: 'application/json' },
    });
    await raiseForStatus(response);
    return (await response.json()) as T;
  }

  async submitStamp(hash: string, priority = false): Promise<StampReceipt> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/stamps`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ hash, priority }),
    });
    await raiseForStatus(response);
    return (await response.json()) as StampReceipt;
  }

  /** Returns null when the service has never seen the hash. */
  async getStatus(hash: string): Promise<StampStatus | null> {
    try {
      return await this.getJson<StampStatus>(`/v1/stamps/${hash}`);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        return null;
      }
      throw err;
    }
  }

  async getProofText(hash: string): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/stamps/${hash}/proof`, {
      method: 'GET',
      headers: { accept: 'application/json' },
    });
    await raiseForStatus(response);
    return await response.text();
  }

  async getTip(): Promise<BlockHeader> {
    return this.getJson<BlockHeader>('/v1/chain/tip');
  }

  async getBlock(blockHash: string): Promise<BlockHeader> {
    return this.getJson<BlockHeader>(`/v1/chain/blocks/${blockHash}`);
  }

  async getTransaction(txid: string): Promise<TransactionInfo> {
    return this.getJson<TransactionInfo>(`/v1/chain/txs/${txid}`);
  }
}
