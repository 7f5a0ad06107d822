import * as path from 'node:path';
import * as tf from '@tensorflow/tfjs';
import { setWasmPaths } from '@tensorflow/tfjs-backend-wasm';

let ready: Promise<string> | null = null;

/**
 * Select the fastest available backend (wasm, falling back to plain cpu).
 * Safe to call repeatedly; all entry points await this before touching tf.
 */
export function initBackend(prefer?: string): Promise<string> {
  if (ready === null) {
    ready = (async () => {
      const want = prefer ?? process.env.QGEC_NN_BACKEND ?? 'wasm';
      if (want === 'wasm') {
        try {
          const wasmDir = path.dirname(require.resolve('@tensorflow/tfjs-backend-wasm'));
          setWasmPaths(wasmDir + path.sep);
          if (await tf.setBackend('wasm')) {
            await tf.ready();
            return tf.getBackend();
          }
        } catch {
          // fall through to cpu
        }
      }
      await tf.setBackend(want === 'wasm' ? 'cpu' : want);
      await tf.ready();
      return tf.getBackend();
    })();
  }
  return ready;
}
