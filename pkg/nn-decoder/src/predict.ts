import * as fs from 'node:fs';
import * as tf from '@tensorflow/tfjs';
import { thresholdBits } from './bits';
import { loadSyndromeLines } from './dataset';
import { predictProbs } from './model';
import { Checkpoint } from './checkpoint';

/**
 * Decode every syndrome line into an nOutput-bit label line, thresholding
 * probabilities at exactly 0.5 (ties to 1).  `serve` uses the same helpers,
 * so file and wire outputs are byte-identical for identical inputs.
 */
export function predictFile(
  model: tf.LayersModel,
  checkpoint: Checkpoint,
  syndromesPath: string,
  outPath: string,
): number {
  const nS = checkpoint.config.nSyndrome;
  const lines = loadSyndromeLines(syndromesPath, nS);
  const flat = new Float32Array(lines.length * nS);
  lines.forEach((line, i) => {
    for (let j = 0; j < nS; j++) flat[i * nS + j] = line.charCodeAt(j) - 0x30;
  });
  const probs = predictProbs(model, flat, lines.length, nS);
  const nOut = checkpoint.config.nOutput;
  const out: string[] = new Array(lines.length);
  for (let i = 0; i < lines.length; i++) {
    out[i] = thresholdBits(probs.subarray(i * nOut, (i + 1) * nOut));
  }
  fs.writeFileSync(outPath, out.join('\n') + (lines.length ? '\n' : ''));
  return lines.length;
}
