import { beforeAll, describe, expect, it } from 'vitest';
import { initBackend } from '../src/backend';
import { Dataset, DatasetHeader } from '../src/dataset';
import { makeConfig } from '../src/model';
import { evaluateLoss, train } from '../src/train';

beforeAll(async () => {
  await initBackend();
});

function header(count: number, nS = 22, nL = 46): DatasetHeader {
  return {
    format: 'qgolay-dataset',
    version: 1,
    code: 'golay:h1',
    n: 23,
    n_syndrome: nS,
    n_label: nL,
    p: 0.0,
    p_grid: null,
    eta: 1.0,
    seed: 0,
    count,
    bit_order: 'test',
  };
}

function zeroDataset(count: number): Dataset {
  return {
    header: header(count),
    syndromes: new Float32Array(count * 22),
    labels: new Float32Array(count * 46),
    count,
  };
}

const TINY = {
  embedDim: 16,
  heads: 2,
  encoderLayers: 1,
  batchSize: 128,
  learningRate: 1e-2,
  seed: 5,
};

describe('train', () => {
  it('converges to near-zero BCE on an all-zero-label dataset', () => {
    // RAdam's rectification warms up over tens of steps, so give it a
    // realistic step count: 30 epochs x 4 batches
    const ds = zeroDataset(384);
    const cfg = makeConfig(22, 46, { ...TINY, batchSize: 96, learningRate: 0.1, epochs: 30 });
    const { model, valLoss } = train(ds, cfg);
    expect(valLoss[valLoss.length - 1]).toBeLessThan(0.02);
    const full = evaluateLoss(model, ds.syndromes, ds.labels, ds.count, 22, 46);
    expect(full).toBeLessThan(0.02);
  });

  it('produces identical loss curves for identical seeds', () => {
    const ds = zeroDataset(256);
    const cfg = makeConfig(22, 46, { ...TINY, epochs: 2 });
    const a = train(ds, cfg);
    const b = train(ds, cfg);
    expect(a.trainLoss).toEqual(b.trainLoss);
    expect(a.valLoss).toEqual(b.valLoss);
  });

  it('rejects dimension mismatches', () => {
    const ds = zeroDataset(64);
    const cfg = makeConfig(21, 46, { ...TINY, epochs: 1 });
    expect(() => train(ds, cfg)).toThrow(/dims/);
  });

  it('rejects empty datasets', () => {
    const ds = zeroDataset(0);
    const cfg = makeConfig(22, 46, { ...TINY, epochs: 1 });
    expect(() => train(ds, cfg)).toThrow(/empty/);
  });

  it('logs one entry per epoch', () => {
    const ds = zeroDataset(128);
    const cfg = makeConfig(22, 46, { ...TINY, epochs: 3 });
    const epochs: number[] = [];
    train(ds, cfg, (log) => epochs.push(log.epoch));
    expect(epochs).toEqual([1, 2, 3]);
  });
});
