/**
 * Browser interface: stamp a file and track its commitment, or verify a
 * proof bundle against a document, all without the file ever leaving the
 * machine. Only 64-character digests and proof metadata cross the network.
 */

import { ServiceClient, StampStatus } from './api.js';
import { parseBundle } from './bundle.js';
import { HashReply } from './hashWorker.js';
import { verifyBundle } from './verify.js';

export const POLL_INTERVAL_MS = 2000;
const DEFAULT_SERVER = 'http://127.0.0.1:8841';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function newWorker(): Worker {
  return new Worker(new URL('./hashWorker.js', import.meta.url), { type: 'module' });
}

/** Hash a file in a dedicated worker, reporting progress as a fraction. */
function hashInWorker(file: Blob, onProgress: (fraction: number) => void): Promise<string> {
  return new Promise((resolve, reject) => {
    const worker = newWorker();
    worker.onmessage = (event: MessageEvent<HashReply>) => {
      const reply = event.data;
      if (reply.type === 'progress') {
        onProgress(reply.totalBytes === 0 ? 1 : reply.bytesHashed / reply.totalBytes);
      } else if (reply.type === 'done') {
        worker.terminate();
        resolve(reply.digest);
      } else {
        worker.terminate();
        reject(new Error(reply.message));
      }
    };
    worker.onerror = (event) => {
      worker.terminate();
      reject(new Error(event.message || 'hashing failed'));
    };
    worker.postMessage({ file });
  });
}

function describeStatus(status: StampStatus): string {
  switch (status.status) {
    case 'pending':
      return `pending — waiting for commitment window ${status.window_id} to close`;
    case 'committed':
      return `committed — transaction ${status.txid} at ${status.confirmations ?? 0} confirmation(s)`;
    case 'final':
      return (
        `final — block time ${status.block_time}, transaction ${status.txid} ` +
        `buried under ${status.confirmations} confirmations`
      );
  }
}

function setupStampPanel(): void {
  const fileInput = el<HTMLInputElement>('stamp-file');
  const priorityInput = el<HTMLInputElement>('stamp-priority');
  const button = el<HTMLButtonElement>('stamp-button');
  const progress = el<HTMLProgressElement>('stamp-progress');
  const digestOut = el<HTMLElement>('stamp-digest');
  const statusOut = el<HTMLElement>('stamp-status');
  const serverInput = el<HTMLInputElement>('server-url');

  let pollTimer: number | undefined;

  button.addEventListener('click', async () => {
    const file = fileInput.files?.[0];
    if (!file) {
      statusOut.textContent = 'choose a file first';
      return;
    }
    if (pollTimer !== undefined) {
      window.clearInterval(pollTimer);
      pollTimer = undefined;
    }
    button.disabled = true;
    digestOut.textContent = '';
    statusOut.textContent = 'hashing locally…';
    progress.value = 0;

    let digest: string;
    try {
      digest = await hashInWorker(file, (fraction) => {
        progress.value = fraction;
      });
    } catch (err) {
      statusOut.textContent = `hashing failed: ${err instanceof Error ? err.message : err}`;
      button.disabled = false;
      return;
    }
    digestOut.textContent = digest;

    const client = new ServiceClient(serverInput.value || DEFAULT_SERVER);
    try {
      const receipt = await client.submitStamp(digest, priorityInput.checked);
      statusOut.textContent = `submitted — window closes at ${receipt.window_closes_at}`;
    } catch (err) {
      statusOut.textContent = `submission failed: ${err instanceof Error ? err.message : err} — is the service running?`;
      button.disabled = false;
      return;
    }

    pollTimer = window.setInterval(async () => {
      try {
        const status = await client.getStatus(digest);
        if (status === null) {
          statusOut.textContent = 'service no longer knows this hash';
          return;
        }
        statusOut.textContent = describeStatus(status);
        if (status.status === 'final' && pollTimer !== undefined) {
          window.clearInterval(pollTimer);
          pollTimer = undefined;
          button.disabled = false;
        }
      } catch {
        statusOut.textContent = 'service unreachable — retrying…';
      }
    }, POLL_INTERVAL_MS);
  });
}

function setupVerifyPanel(): void {
  const bundleInput = el<HTMLInputElement>('verify-bundle');
  const docInput = el<HTMLInputElement>('verify-file');
  const button = el<HTMLButtonElement>('verify-button');
  const resultOut = el<HTMLElement>('verify-result');
  const serverInput = el<HTMLInputElement>('server-url');

  button.addEventListener('click', async () => {
    const bundleFile = bundleInput.files?.[0];
    const docFile = docInput.files?.[0];
    if (!bundleFile || !docFile) {
      resultOut.textContent = 'choose a proof bundle and a document';
      resultOut.dataset['state'] = 'error';
      return;
    }
    button.disabled = true;
    resultOut.textContent = 'verifying…';
    resultOut.dataset['state'] = 'working';
    try {
      let bundle;
      try {
        bundle = parseBundle(await bundleFile.text());
      } catch (err) {
        resultOut.textContent = `bundle parse error: ${err instanceof Error ? err.message : err}`;
        resultOut.dataset['state'] = 'parse-error';
        return;
      }
      const digest = await hashInWorker(docFile, () => {});
      const client = new ServiceClient(serverInput.value || DEFAULT_SERVER);
      const result = await verifyBundle(client, digest, bundle);
      resultOut.dataset['state'] = result.verdict;
      if (result.verdict === 'verified') {
        resultOut.textContent = `VERIFIED — existed at ${result.attestedTime} (${result.confirmations} confirmations)`;
      } else if (result.verdict === 'pending') {
        resultOut.textContent = `PENDING — only ${result.confirmations} confirmation(s) so far`;
      } else {
        resultOut.textContent = `MISMATCH — ${result.failureDetail}`;
      }
    } catch (err) {
      resultOut.textContent = `verification failed: ${err instanceof Error ? err.message : err}`;
      resultOut.dataset['state'] = 'error';
    } finally {
      button.disabled = false;
    }
  });
}

setupStampPanel();
setupVerifyPanel();
