import * as tf from '@tensorflow/tfjs';

/** Hyperparameters; the defaults are the training setting used throughout. */
export interface ModelConfig {
  nSyndrome: number;
  nOutput: number;
  batchSize: number;
  epochs: number;
  learningRate: number;
  embedDim: number;
  heads: number;
  encoderLayers: number;
  /** fraction of the training file held out for validation, fixed by seed */
  validationSplit: number;
  seed: number;
}

export const TABLE_DEFAULTS = {
  batchSize: 1000,
  epochs: 30,
  learningRate: 1e-4,
  embedDim: 128,
  heads: 8,
  encoderLayers: 4,
  validationSplit: 0.05,
  seed: 0,
} as const;

export function makeConfig(
  nSyndrome: number,
  nOutput: number,
  overrides: Partial<ModelConfig> = {},
): ModelConfig {
  return { nSyndrome, nOutput, ...TABLE_DEFAULTS, ...overrides };
}

/**
 * Learned embedding for {0,1} token values, computed as
 * e0 + bit * (e1 - e0): arithmetic instead of a table gather, so every
 * backend with mul/add gradients can train it.
 */
class BitValueEmbedding extends tf.layers.Layer {
  static className = 'BitValueEmbedding';
  private zero!: ReturnType<tf.layers.Layer['addWeight']>;
  private one!: ReturnType<tf.layers.Layer['addWeight']>;

  constructor(private readonly dim: number, private readonly seed: number) {
    super({ name: 'value_embedding' });
  }

  override build(inputShape: tf.Shape | tf.Shape[]): void {
    const init = (offset: number) =>
      tf.initializers.randomNormal({ mean: 0, stddev: 0.02, seed: this.seed + offset });
    this.zero = this.addWeight('zero', [this.dim], 'float32', init(0));
    this.one = this.addWeight('one', [this.dim], 'float32', init(1));
    super.build(inputShape);
  }

  override call(inputs: tf.Tensor | tf.Tensor[]): tf.Tensor {
    return tf.tidy(() => {
      const x = (Array.isArray(inputs) ? inputs[0] : inputs).toFloat(); // [B, L]
      const bits = tf.expandDims(x, 2); // [B, L, 1]
      const e0 = tf.reshape(this.zero.read(), [1, 1, this.dim]);
      const e1 = tf.reshape(this.one.read(), [1, 1, this.dim]);
      return tf.add(e0, tf.mul(bits, tf.sub(e1, e0)));
    });
  }

  override computeOutputShape(inputShape: tf.Shape): tf.Shape {
    return [...(inputShape as number[]), this.dim];
  }
}

/**
 * Layer normalization over the channel axis from primitive ops.  The stock
 * layers implementation lowers its gradient to per-position slices, which
 * is catastrophically slow on the wasm backend; mean/variance arithmetic
 * keeps the backward pass in a handful of dense kernels.
 */
class ChannelLayerNorm extends tf.layers.Layer {
  static className = 'ChannelLayerNorm';
  private gamma!: ReturnType<tf.layers.Layer['addWeight']>;
  private beta!: ReturnType<tf.layers.Layer['addWeight']>;

  constructor(private readonly dim: number, private readonly epsilon: number, name: string) {
    super({ name });
  }

  override build(inputShape: tf.Shape | tf.Shape[]): void {
    this.gamma = this.addWeight('gamma', [this.dim], 'float32', tf.initializers.ones());
    this.beta = this.addWeight('beta', [this.dim], 'float32', tf.initializers.zeros());
    super.build(inputShape);
  }

  override call(inputs: tf.Tensor | tf.Tensor[]): tf.Tensor {
    return tf.tidy(() => {
      const x = Array.isArray(inputs) ? inputs[0] : inputs;
      const mean = tf.mean(x, -1, true);
      const centered = tf.sub(x, mean);
      const variance = tf.mean(tf.square(centered), -1, true);
      const normed = tf.mul(centered, tf.rsqrt(tf.add(variance, this.epsilon)));
      return tf.add(tf.mul(normed, this.gamma.read()), this.beta.read());
    });
  }

  override computeOutputShape(inputShape: tf.Shape): tf.Shape {
    return inputShape;
  }
}

/** Learned additive position table, shape [seqLen, dim]. */
class PositionEmbedding extends tf.layers.Layer {
  static className = 'PositionEmbedding';
  private table!: ReturnType<tf.layers.Layer['addWeight']>;

  constructor(private readonly len: number, private readonly dim: number, private readonly seed: number) {
    super({ name: `position_embedding_${len}x${dim}` });
  }

  override build(inputShape: tf.Shape | tf.Shape[]): void {
    this.table = this.addWeight(
      'table',
      [this.len, this.dim],
      'float32',
      tf.initializers.randomNormal({ mean: 0, stddev: 0.02, seed: this.seed }),
    );
    super.build(inputShape);
  }

  override call(inputs: tf.Tensor | tf.Tensor[]): tf.Tensor {
    return tf.tidy(() => {
      const x = Array.isArray(inputs) ? inputs[0] : inputs;
      return tf.add(x, this.table.read());
    });
  }

  override computeOutputShape(inputShape: tf.Shape): tf.Shape {
    return inputShape;
  }
}

/** Standard scaled-dot-product self-attention with `heads` heads. */
class MultiHeadSelfAttention extends tf.layers.Layer {
  static className = 'MultiHeadSelfAttention';
  private wq!: ReturnType<tf.layers.Layer['addWeight']>;
  private wk!: ReturnType<tf.layers.Layer['addWeight']>;
  private wv!: ReturnType<tf.layers.Layer['addWeight']>;
  private wo!: ReturnType<tf.layers.Layer['addWeight']>;
  private readonly headDim: number;

  constructor(
    private readonly dim: number,
    private readonly heads: number,
    private readonly seed: number,
    name: string,
  ) {
    super({ name });
    if (dim % heads !== 0) {
      throw new Error(`embedDim ${dim} not divisible by heads ${heads}`);
    }
    this.headDim = dim / heads;
  }

  override build(inputShape: tf.Shape | tf.Shape[]): void {
    const init = (offset: number) =>
      tf.initializers.glorotUniform({ seed: this.seed + offset });
    this.wq = this.addWeight('wq', [this.dim, this.dim], 'float32', init(1));
    this.wk = this.addWeight('wk', [this.dim, this.dim], 'float32', init(2));
    this.wv = this.addWeight('wv', [this.dim, this.dim], 'float32', init(3));
    this.wo = this.addWeight('wo', [this.dim, this.dim], 'float32', init(4));
    super.build(inputShape);
  }

  private split(x: tf.Tensor3D, w: tf.Tensor): tf.Tensor4D {
    // [B, L, D] x [D, D] -> [B, heads, L, headDim]
    const [b, l] = x.shape;
    const projected = tf.matMul(x.reshape([b * l, this.dim]), w);
    return projected
      .reshape([b, l, this.heads, this.headDim])
      .transpose([0, 2, 1, 3]) as tf.Tensor4D;
  }

  override call(inputs: tf.Tensor | tf.Tensor[]): tf.Tensor {
    return tf.tidy(() => {
      const x = (Array.isArray(inputs) ? inputs[0] : inputs) as tf.Tensor3D;
      const [b, l] = x.shape;
      const q = this.split(x, this.wq.read());
      const k = this.split(x, this.wk.read());
      const v = this.split(x, this.wv.read());
      const scores = tf.div(tf.matMul(q, k, false, true), Math.sqrt(this.headDim));
      const attention = tf.softmax(scores, -1);
      const context = tf
        .matMul(attention, v) // [B, heads, L, headDim]
        .transpose([0, 2, 1, 3])
        .reshape([b * l, this.dim]);
      return tf.matMul(context, this.wo.read()).reshape([b, l, this.dim]);
    });
  }

  override computeOutputShape(inputShape: tf.Shape): tf.Shape {
    return inputShape;
  }
}

/**
 * Build the decoder network: one token per syndrome bit (learned value and
 * position embeddings), a stack of pre-activation-free standard encoder
 * blocks (self-attention + feed-forward, residuals, layer norm), mean
 * pooling over the sequence, and a sigmoid head of nOutput units.
 */
export function buildModel(config: ModelConfig): tf.LayersModel {
  const seed = config.seed;
  const input = tf.input({ shape: [config.nSyndrome], dtype: 'int32', name: 'syndrome_bits' });
  let x = new BitValueEmbedding(config.embedDim, seed + 100).apply(input) as tf.SymbolicTensor;
  x = new PositionEmbedding(config.nSyndrome, config.embedDim, seed + 200).apply(x) as tf.SymbolicTensor;
  for (let layer = 0; layer < config.encoderLayers; layer++) {
    const attention = new MultiHeadSelfAttention(
      config.embedDim,
      config.heads,
      seed + 1000 * (layer + 1),
      `self_attention_${layer}`,
    ).apply(x) as tf.SymbolicTensor;
    x = tf.layers.add({ name: `attn_residual_${layer}` }).apply([x, attention]) as tf.SymbolicTensor;
    x = new ChannelLayerNorm(config.embedDim, 1e-5, `attn_norm_${layer}`).apply(x) as tf.SymbolicTensor;
    const ff1 = tf.layers
      .dense({
        name: `ff_expand_${layer}`,
        units: 4 * config.embedDim,
        activation: 'relu',
        kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 1000 * (layer + 1) + 10 }),
      })
      .apply(x) as tf.SymbolicTensor;
    const ff2 = tf.layers
      .dense({
        name: `ff_project_${layer}`,
        units: config.embedDim,
        kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 1000 * (layer + 1) + 11 }),
      })
      .apply(ff1) as tf.SymbolicTensor;
    x = tf.layers.add({ name: `ff_residual_${layer}` }).apply([x, ff2]) as tf.SymbolicTensor;
    x = new ChannelLayerNorm(config.embedDim, 1e-5, `ff_norm_${layer}`).apply(x) as tf.SymbolicTensor;
  }
  x = tf.layers.globalAveragePooling1d({ name: 'mean_pool' }).apply(x) as tf.SymbolicTensor;
  const output = tf.layers
    .dense({
      name: 'bit_probabilities',
      units: config.nOutput,
      activation: 'sigmoid',
      kernelInitializer: tf.initializers.glorotUniform({ seed: seed + 3 }),
    })
    .apply(x) as tf.SymbolicTensor;
  return tf.model({ inputs: input, outputs: output });
}

/** Forward pass over a row-major [count, nSyndrome] bit array. */
export function predictProbs(
  model: tf.LayersModel,
  syndromes: Float32Array,
  count: number,
  nSyndrome: number,
  batchSize = 1024,
): Float32Array {
  const nOutput = model.outputs[0].shape[1] as number;
  const out = new Float32Array(count * nOutput);
  for (let start = 0; start < count; start += batchSize) {
    const size = Math.min(batchSize, count - start);
    const probs = tf.tidy(() => {
      const slice = syndromes.subarray(start * nSyndrome, (start + size) * nSyndrome);
      const xs = tf.tensor2d(slice, [size, nSyndrome], 'int32');
      return model.predict(xs, { batchSize: size }) as tf.Tensor2D;
    });
    out.set(probs.dataSync() as Float32Array, start * nOutput);
    probs.dispose();
  }
  return out;
}
