import { bytesToHex } from './hex.js';
import { Sha256 } from './sha256.js';

/** Files are hashed in slices this large so no full copy ever sits in memory. */
export const CHUNK_SIZE = 4 * 1024 * 1024;

export type ProgressCallback = (bytesDone: number, bytesTotal: number) => void;

/**
 * SHA-256 of a file or blob, computed incrementally chunk by chunk.
 * Only the resulting digest ever leaves the machine.
 */
export async function hashFile(file: Blob, onProgress?: ProgressCallback): Promise<string> {
  const hasher = new Sha256();
  onProgress?.(0, file.size);
  for (let offset = 0; offset < file.size; offset += CHUNK_SIZE) {
    const end = Math.min(offset + CHUNK_SIZE, file.size);
    const slice = await file.slice(offset, end).arrayBuffer();
    hasher.update(new Uint8Array(slice));
    onProgress?.(end, file.size);
  }
  return bytesToHex(hasher.digest());
}
