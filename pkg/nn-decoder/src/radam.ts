import * as tf from '@tensorflow/tfjs';

/**
 * Rectified Adam.
 *
 * Keeps Adam's first/second moment estimates but rectifies the adaptive
 * learning rate once the variance estimate becomes tractable
 * (rho_t > 5, matching the reference implementations); before that the
 * update is plain bias-corrected momentum, theta -= lr * mHat.
 */
export class RAdam extends tf.Optimizer {
  static className = 'RAdam';

  private step = 0;
  private readonly rhoInf: number;
  private firstMoment = new Map<string, tf.Variable>();
  private secondMoment = new Map<string, tf.Variable>();

  constructor(
    private readonly learningRate = 1e-4,
    private readonly beta1 = 0.9,
    private readonly beta2 = 0.999,
    private readonly epsilon = 1e-8,
  ) {
    super();
    this.rhoInf = 2 / (1 - beta2) - 1;
  }

  private slot(store: Map<string, tf.Variable>, name: string, like: tf.Tensor): tf.Variable {
    let v = store.get(name);
    if (v === undefined) {
      v = tf.variable(tf.zerosLike(like), false);
      store.set(name, v);
    }
    return v;
  }

  applyGradients(
    variableGradients: tf.NamedTensorMap | Array<{ name: string; tensor: tf.Tensor }>,
  ): void {
    this.step += 1;
    const t = this.step;
    const bc1 = 1 - Math.pow(this.beta1, t);
    const bc2 = 1 - Math.pow(this.beta2, t);
    const rhoT = this.rhoInf - (2 * t * Math.pow(this.beta2, t)) / bc2;
    const rectified = rhoT > 5;
    let rect = 1;
    if (rectified) {
      rect = Math.sqrt(
        ((rhoT - 4) * (rhoT - 2) * this.rhoInf) /
          ((this.rhoInf - 4) * (this.rhoInf - 2) * rhoT),
      );
    }
    const entries: Array<[string, tf.Tensor]> = Array.isArray(variableGradients)
      ? variableGradients.map((ng) => [ng.name, ng.tensor])
      : Object.entries(variableGradients);
    for (const [name, grad] of entries) {
      const variable = tf.engine().registeredVariables[name];
      const m = this.slot(this.firstMoment, name, variable);
      const v = this.slot(this.secondMoment, name, variable);
      tf.tidy(() => {
        const mNew = tf.add(tf.mul(m, this.beta1), tf.mul(grad, 1 - this.beta1));
        const vNew = tf.add(tf.mul(v, this.beta2), tf.mul(tf.square(grad), 1 - this.beta2));
        m.assign(mNew);
        v.assign(vNew);
        const mHat = tf.div(mNew, bc1);
        let update: tf.Tensor;
        if (rectified) {
          const denom = tf.add(tf.sqrt(tf.div(vNew, bc2)), this.epsilon);
          update = tf.mul(tf.div(mHat, denom), this.learningRate * rect);
        } else {
          update = tf.mul(mHat, this.learningRate);
        }
        variable.assign(tf.sub(variable, update));
      });
    }
  }

  dispose(): void {
    for (const v of this.firstMoment.values()) v.dispose();
    for (const v of this.secondMoment.values()) v.dispose();
    this.firstMoment.clear();
    this.secondMoment.clear();
    super.dispose();
  }

  getConfig(): tf.serialization.ConfigDict {
    return {
      learningRate: this.learningRate,
      beta1: this.beta1,
      beta2: this.beta2,
      epsilon: this.epsilon,
    };
  }
}
