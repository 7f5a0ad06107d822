import * as tf from '@tensorflow/tfjs';
import { Dataset } from './dataset';
import { ModelConfig, buildModel } from './model';
import { RAdam } from './radam';

export interface EpochLog {
  epoch: number;
  trainLoss: number;
  valLoss: number;
  seconds: number;
}

export interface TrainResult {
  model: tf.LayersModel;
  trainLoss: number[];
  valLoss: number[];
}

/** Deterministic Fisher-Yates shuffle from a splitmix-style integer stream. */
function shuffledIndices(count: number, seed: number, round: number): Uint32Array {
  const idx = new Uint32Array(count);
  for (let i = 0; i < count; i++) idx[i] = i;
  let state = (BigInt(seed) * 1000003n + BigInt(round) + 0x9e3779b97f4a7c15n) & 0xffffffffffffffffn;
  const next = () => {
    state = (state + 0x9e3779b97f4a7c15n) & 0xffffffffffffffffn;
    let z = state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & 0xffffffffffffffffn;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & 0xffffffffffffffffn;
    return z ^ (z >> 31n);
  };
  for (let i = count - 1; i > 0; i--) {
    const j = Number(next() % BigInt(i + 1));
    const tmp = idx[i];
    idx[i] = idx[j];
    idx[j] = tmp;
  }
  return idx;
}

function gather(
  src: Float32Array,
  width: number,
  indices: Uint32Array,
  from: number,
  to: number,
): Float32Array {
  const out = new Float32Array((to - from) * width);
  for (let i = from; i < to; i++) {
    const row = indices[i] * width;
    out.set(src.subarray(row, row + width), (i - from) * width);
  }
  return out;
}

function meanBce(model: tf.LayersModel, xs: tf.Tensor2D, ys: tf.Tensor2D): tf.Scalar {
  const probs = model.apply(xs, { training: false }) as tf.Tensor2D;
  return tf.losses.logLoss(ys, probs, undefined, 1e-7);
}

export function evaluateLoss(
  model: tf.LayersModel,
  syndromes: Float32Array,
  labels: Float32Array,
  count: number,
  nSyndrome: number,
  nLabel: number,
  batchSize = 1024,
): number {
  if (count === 0) return NaN;
  let total = 0;
  for (let start = 0; start < count; start += batchSize) {
    const size = Math.min(batchSize, count - start);
    const loss = tf.tidy(() => {
      const xs = tf.tensor2d(
        syndromes.subarray(start * nSyndrome, (start + size) * nSyndrome),
        [size, nSyndrome],
        'int32',
      );
      const ys = tf.tensor2d(
        labels.subarray(start * nLabel, (start + size) * nLabel),
        [size, nLabel],
      );
      return meanBce(model, xs as tf.Tensor2D, ys);
    });
    total += loss.dataSync()[0] * size;
    loss.dispose();
  }
  return total / count;
}

/**
 * Train on a harness dataset with binary cross-entropy against the exact
 * error labels.  The last `validationSplit` fraction of a seed-shuffled
 * permutation is held out; batch order reshuffles per epoch from the same
 * stream, so identical inputs give identical loss curves.
 */
export function train(
  dataset: Dataset,
  config: ModelConfig,
  onEpoch?: (log: EpochLog) => void,
): TrainResult {
  const { header } = dataset;
  if (header.n_syndrome !== config.nSyndrome || header.n_label !== config.nOutput) {
    throw new Error(
      `dataset dims ${header.n_syndrome}->${header.n_label} do not match ` +
        `config ${config.nSyndrome}->${config.nOutput}`,
    );
  }
  if (dataset.count === 0) throw new Error('empty dataset');
  const nS = config.nSyndrome;
  const nL = config.nOutput;
  const split = shuffledIndices(dataset.count, config.seed, 0);
  const valCount = Math.floor(dataset.count * config.validationSplit);
  const trainCount = dataset.count - valCount;
  if (trainCount < 1) throw new Error('validation split leaves no training data');
  const trainX = gather(dataset.syndromes, nS, split, 0, trainCount);
  const trainY = gather(dataset.labels, nL, split, 0, trainCount);
  const valX = gather(dataset.syndromes, nS, split, trainCount, dataset.count);
  const valY = gather(dataset.labels, nL, split, trainCount, dataset.count);

  const model = buildModel(config);
  const optimizer = new RAdam(config.learningRate);
  // LayerVariable types its backing tf.Variable as protected; runtime access is fine
  const variables = model.trainableWeights.map((w) => (w as any).val as tf.Variable);
  const trainLoss: number[] = [];
  const valLoss: number[] = [];
  for (let epoch = 0; epoch < config.epochs; epoch++) {
    const started = Date.now();
    const order = shuffledIndices(trainCount, config.seed, epoch + 1);
    let epochTotal = 0;
    for (let start = 0; start < trainCount; start += config.batchSize) {
      const end = Math.min(start + config.batchSize, trainCount);
      const xsArr = gather(trainX, nS, order, start, end);
      const ysArr = gather(trainY, nL, order, start, end);
      const cost = tf.tidy(() => {
        const xs = tf.tensor2d(xsArr, [end - start, nS], 'int32');
        const ys = tf.tensor2d(ysArr, [end - start, nL]);
        const loss = optimizer.minimize(
          () => tf.losses.logLoss(ys, model.apply(xs, { training: true }) as tf.Tensor2D, undefined, 1e-7),
          true,
          variables,
        ) as tf.Scalar;
        return loss;
      });
      epochTotal += cost.dataSync()[0] * (end - start);
      cost.dispose();
    }
    trainLoss.push(epochTotal / trainCount);
    valLoss.push(evaluateLoss(model, valX, valY, valCount, nS, nL));
    onEpoch?.({
      epoch: epoch + 1,
      trainLoss: trainLoss[trainLoss.length - 1],
      valLoss: valLoss[valLoss.length - 1],
      seconds: (Date.now() - started) / 1000,
    });
  }
  optimizer.dispose();
  return { model, trainLoss, valLoss };
}
