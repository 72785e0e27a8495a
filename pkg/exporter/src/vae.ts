/**
 * Tiny VAE: dense encoder to (mu, logvar), reparametrized sample, dense
 * decoder with a final tanh. Trained with Adam on MSE reconstruction plus
 * a KL term. Deliberately small: the point is exporting generators whose
 * induced density can be inspected downstream, not benchmark accuracy.
 */
import { Adam, Mlp } from "./mlp.js";
import { Rng } from "./rng.js";

export interface VaeOptions {
  latentDim: number;
  hidden: number;
  klWeight: number;
  learningRate: number;
}

export const DEFAULT_OPTIONS: VaeOptions = {
  latentDim: 2,
  hidden: 16,
  klWeight: 0.02,
  learningRate: 2e-3,
};

export interface TrainResult {
  steps: number;
  finalLoss: number;
}

export class Vae {
  encoder: Mlp; // x -> [mu, logvar]
  decoder: Mlp; // z -> x_hat, final tanh
  readonly inputDim: number;
  readonly latentDim: number;

  constructor(rng: Rng, inputDim: number, options: VaeOptions) {
    this.inputDim = inputDim;
    this.latentDim = options.latentDim;
    this.encoder = Mlp.create(
      rng,
      [inputDim, options.hidden, options.hidden, 2 * options.latentDim],
      ["tanh", "tanh", "identity"],
    );
    this.decoder = Mlp.create(
      rng,
      [options.latentDim, options.hidden, options.hidden, inputDim],
      ["tanh", "tanh", "tanh"],
    );
  }

  encodeMean(x: number[]): number[] {
    return this.encoder.forward(x).slice(0, this.latentDim);
  }

  decode(z: number[]): number[] {
    return this.decoder.forward(z);
  }

  /**
   * One Adam step on a batch. Returns the mean per-sample loss.
   */
  trainStep(batch: number[][], rng: Rng, encOpt: Adam, decOpt: Adam, klWeight: number): number {
    const encGrads = this.encoder.zeroGrads();
    const decGrads = this.decoder.zeroGrads();
    let totalLoss = 0.0;

    for (const x of batch) {
      const encTrace = this.encoder.trace(x);
      const mu = encTrace.output.slice(0, this.latentDim);
      const logvar = encTrace.output.slice(this.latentDim);
      const eps = rng.normalVector(this.latentDim);
      const z = mu.map((m, j) => m + eps[j] * Math.exp(0.5 * logvar[j]));

      const decTrace = this.decoder.trace(z);
      const xHat = decTrace.output;

      let recon = 0.0;
      const dXHat = new Array(this.inputDim);
      for (let d = 0; d < this.inputDim; d++) {
        const diff = xHat[d] - x[d];
        recon += diff * diff;
        dXHat[d] = 2.0 * diff;
      }
      let kl = 0.0;
      for (let j = 0; j < this.latentDim; j++) {
        kl += 0.5 * (mu[j] * mu[j] + Math.exp(logvar[j]) - logvar[j] - 1.0);
      }
      totalLoss += recon + klWeight * kl;

      const dZ = this.decoder.backward(decTrace, dXHat, decGrads);

      const dEncOut = new Array(2 * this.latentDim).fill(0.0);
      for (let j = 0; j < this.latentDim; j++) {
        // through the reparametrized sample plus the KL term
        dEncOut[j] = dZ[j] + klWeight * mu[j];
        dEncOut[this.latentDim + j] =
          dZ[j] * eps[j] * 0.5 * Math.exp(0.5 * logvar[j]) +
          klWeight * 0.5 * (Math.exp(logvar[j]) - 1.0);
      }
      this.encoder.backward(encTrace, dEncOut, encGrads);
    }

    const scale = 1.0 / batch.length;
    encOpt.step(encGrads, scale);
    decOpt.step(decGrads, scale);
    return totalLoss * scale;
  }

  train(data: number[][], steps: number, batchSize: number, seed: number, klWeight: number, lr: number): TrainResult {
    const rng = new Rng(seed);
    const encOpt = new Adam(this.encoder, lr);
    const decOpt = new Adam(this.decoder, lr);
    let loss = Number.NaN;
    for (let step = 0; step < steps; step++) {
      let batch: number[][];
      if (batchSize >= data.length) {
        batch = data;
      } else {
        batch = Array.from({ length: batchSize }, () => {
          const index = Math.floor(rng.uniform() * data.length);
          return data[index];
        });
      }
      loss = this.trainStep(batch, rng, encOpt, decOpt, klWeight);
      if (!Number.isFinite(loss)) {
        return { steps: step + 1, finalLoss: loss };
      }
    }
    return { steps, finalLoss: loss };
  }
}
