import * as net from 'node:net';
import * as readline from 'node:readline';
import * as tf from '@tensorflow/tfjs';
import { Writable } from 'node:stream';
import { isBitString, thresholdBits } from './bits';
import { Checkpoint } from './checkpoint';
import { predictProbs } from './model';

const MAGIC = 'QGEC1';

export interface ServeSession {
  /** resolves when the peer says BYE or the stream ends */
  done: Promise<void>;
}

/**
 * Answer one wire-protocol session: HELLO handshake, then one nOutput-bit
 * reply per syndrome line until BYE/EOF.  Requests are handled strictly in
 * order; inference is synchronous so responses cannot interleave.
 */
export function serveSession(
  model: tf.LayersModel,
  checkpoint: Checkpoint,
  input: NodeJS.ReadableStream,
  output: Writable,
): ServeSession {
  const nS = checkpoint.config.nSyndrome;
  const nOut = checkpoint.config.nOutput;
  const codeId = checkpoint.datasetHeader?.code ?? null;
  const rl = readline.createInterface({ input, crlfDelay: Infinity });
  let shookHands = false;
  const done = new Promise<void>((resolve) => {
    rl.on('line', (line) => {
      if (!shookHands) {
        const parts = line.split(/\s+/);
        if (parts.length !== 5 || parts[0] !== 'HELLO' || parts[1] !== MAGIC) {
          output.write('ERR protocol\n');
          rl.close();
          return;
        }
        if (codeId !== null && parts[2] !== codeId) {
          output.write('ERR code\n');
          rl.close();
          return;
        }
        if (parts[3] !== String(nS) || parts[4] !== String(nOut)) {
          output.write('ERR dims\n');
          rl.close();
          return;
        }
        shookHands = true;
        output.write('OK\n');
        return;
      }
      if (line === 'BYE') {
        rl.close();
        return;
      }
      if (!isBitString(line, nS)) {
        output.write('ERR bits\n');
        return;
      }
      const flat = new Float32Array(nS);
      for (let j = 0; j < nS; j++) flat[j] = line.charCodeAt(j) - 0x30;
      const probs = predictProbs(model, flat, 1, nS);
      output.write(thresholdBits(probs) + '\n');
    });
    rl.on('close', resolve);
  });
  return { done };
}

export async function serveStdio(model: tf.LayersModel, checkpoint: Checkpoint): Promise<void> {
  await serveSession(model, checkpoint, process.stdin, process.stdout).done;
}

/** Serve TCP sessions until killed; prints the bound address once ready. */
export function serveTcp(
  model: tf.LayersModel,
  checkpoint: Checkpoint,
  host: string,
  port: number,
): Promise<never> {
  const server = net.createServer((socket) => {
    socket.on('error', () => socket.destroy());
    serveSession(model, checkpoint, socket, socket).done.then(() => socket.end());
  });
  return new Promise(() => {
    server.listen(port, host, () => {
      const addr = server.address() as net.AddressInfo;
      process.stdout.write(`LISTENING ${addr.address} ${addr.port}\n`);
    });
  });
}
