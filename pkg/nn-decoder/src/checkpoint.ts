import * as fs from 'node:fs';
import * as tf from '@tensorflow/tfjs';
import { DatasetHeader } from './dataset';
import { ModelConfig, buildModel } from './model';

export interface CheckpointHistory {
  trainLoss: number[];
  valLoss: number[];
}

/** Single-file self-describing checkpoint: config, data provenance, weights. */
export interface Checkpoint {
  format: 'qgolay-nn-checkpoint';
  version: 1;
  config: ModelConfig;
  datasetHeader: DatasetHeader | null;
  history: CheckpointHistory;
  weights: Array<{ shape: number[]; data: string }>;
}

export function saveCheckpoint(
  path: string,
  model: tf.LayersModel,
  config: ModelConfig,
  datasetHeader: DatasetHeader | null,
  history: CheckpointHistory,
): void {
  const weights = model.getWeights().map((w) => {
    const data = w.dataSync() as Float32Array;
    return {
      shape: w.shape.slice(),
      data: Buffer.from(data.buffer, data.byteOffset, data.byteLength).toString('base64'),
    };
  });
  const payload: Checkpoint = {
    format: 'qgolay-nn-checkpoint',
    version: 1,
    config,
    datasetHeader,
    history,
    weights,
  };
  fs.writeFileSync(path, JSON.stringify(payload));
}

export function loadCheckpoint(path: string): { model: tf.LayersModel; checkpoint: Checkpoint } {
  const checkpoint = JSON.parse(fs.readFileSync(path, 'utf8')) as Checkpoint;
  if (checkpoint.format !== 'qgolay-nn-checkpoint') {
    throw new Error(`${path}: not a qgolay-nn-checkpoint file`);
  }
  const model = buildModel(checkpoint.config);
  const current = model.getWeights();
  if (current.length !== checkpoint.weights.length) {
    throw new Error(
      `${path}: checkpoint has ${checkpoint.weights.length} weight tensors, model needs ${current.length}`,
    );
  }
  const tensors = checkpoint.weights.map((w, i) => {
    const buf = Buffer.from(w.data, 'base64');
    const arr = new Float32Array(buf.buffer, buf.byteOffset, buf.byteLength / 4);
    const expect = current[i].shape;
    if (JSON.stringify(expect) !== JSON.stringify(w.shape)) {
      throw new Error(`${path}: weight ${i} shape ${w.shape} != model shape ${expect}`);
    }
    return tf.tensor(Array.from(arr), w.shape as number[], 'float32');
  });
  model.setWeights(tensors);
  tensors.forEach((t) => t.dispose());
  return { model, checkpoint };
}
