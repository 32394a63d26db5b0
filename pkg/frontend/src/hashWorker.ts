/**
 * Dedicated worker that hashes a file off the interface thread.
 *
 * Receives {file} and replies with a stream of {type:"progress"} messages
 * followed by one {type:"done", digest} or {type:"error", message}.
 */

import { hashFile } from './hashFile.js';

export interface HashRequest {
  file: Blob;
}

export type HashReply =
  | { type: 'progress'; bytesHashed: number; totalBytes: number }
  | { type: 'done'; digest: string }
  | { type: 'error'; message: string };

const ctx = self as unknown as Worker;

ctx.onmessage = async (event: MessageEvent<HashRequest>) => {
  const { file } = event.data;
  try {
    const digest = await hashFile(file, (bytesHashed, totalBytes) => {
      const reply: HashReply = { type: 'progress', bytesHashed, totalBytes };
      ctx.postMessage(reply);
    });
    const reply: HashReply = { type: 'done', digest };
    ctx.postMessage(reply);
  } catch (err) {
    const reply: HashReply = {
      type: 'error',
      message: err instanceof Error ? err.message : String(err),
    };
    ctx.postMessage(reply);
  }
};
