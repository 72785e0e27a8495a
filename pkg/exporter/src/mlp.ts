/**
 * Minimal dense MLP with manual backprop and Adam, in plain float64 arrays.
 * Only what the VAE needs: tanh or identity activations per layer.
 */
import { Rng } from "./rng.js";

export type Activation = "tanh" | "identity";

export interface DenseLayer {
  weights: number[][]; // out x in, row-major
  bias: number[];
  activation: Activation;
}

export interface LayerGrads {
  weights: number[][];
  bias: number[];
}

export interface ForwardTrace {
  /** layer inputs, one per layer, plus the final output appended */
  inputs: number[][];
  output: number[];
}

export function makeLayer(rng: Rng, inDim: number, outDim: number, activation: Activation): DenseLayer {
  // Xavier init keeps tanh activations in their linear-ish range
  const std = Math.sqrt(2.0 / (inDim + outDim));
  const weights = Array.from({ length: outDim }, () =>
    Array.from({ length: inDim }, () => rng.normal() * std),
  );
  const bias = Array.from({ length: outDim }, () => 0.0);
  return { weights, bias, activation };
}

function applyActivation(activation: Activation, pre: number[]): number[] {
  if (activation === "identity") return pre.slice();
  return pre.map(Math.tanh);
}

export class Mlp {
  layers: DenseLayer[];

  constructor(layers: DenseLayer[]) {
    this.layers = layers;
  }

  static create(rng: Rng, dims: number[], activations: Activation[]): Mlp {
    if (activations.length !== dims.length - 1) {
      throw new Error("need one activation per layer");
    }
    const layers: DenseLayer[] = [];
    for (let i = 0; i < dims.length - 1; i++) {
      layers.push(makeLayer(rng, dims[i], dims[i + 1], activations[i]));
    }
    return new Mlp(layers);
  }

  forward(input: number[]): number[] {
    let x = input;
    for (const layer of this.layers) {
      const pre = layer.weights.map(
        (row, r) => row.reduce((acc, w, c) => acc + w * x[c], layer.bias[r]),
      );
      x = applyActivation(layer.activation, pre);
    }
    return x;
  }

  /** Forward pass retaining per-layer inputs and post-activations for backprop. */
  trace(input: number[]): ForwardTrace {
    const inputs: number[][] = [];
    let x = input;
    for (const layer of this.layers) {
      inputs.push(x);
      const pre = layer.weights.map(
        (row, r) => row.reduce((acc, w, c) => acc + w * x[c], layer.bias[r]),
      );
      x = applyActivation(layer.activation, pre);
    }
    return { inputs, output: x };
  }

  /**
   * Backprop dLoss/dOutput through the traced pass; accumulates into grads
   * and returns dLoss/dInput.
   */
  backward(traceResult: ForwardTrace, dOut: number[], grads: LayerGrads[]): number[] {
    let delta = dOut.slice();
    let post = traceResult.output;
    for (let li = this.layers.length - 1; li >= 0; li--) {
      const layer = this.layers[li];
      const input = traceResult.inputs[li];
      if (layer.activation === "tanh") {
        delta = delta.map((d, r) => d * (1.0 - post[r] * post[r]));
      }
      const grad = grads[li];
      for (let r = 0; r < layer.weights.length; r++) {
        grad.bias[r] += delta[r];
        const wRow = grad.weights[r];
        for (let c = 0; c < input.length; c++) {
          wRow[c] += delta[r] * input[c];
        }
      }
      const dIn = new Array(input.length).fill(0.0);
      for (let r = 0; r < layer.weights.length; r++) {
        const row = layer.weights[r];
        for (let c = 0; c < input.length; c++) {
          dIn[c] += row[c] * delta[r];
        }
      }
      delta = dIn;
      // post-activation of the previous layer is that layer's recorded input
      post = input;
    }
    return delta;
  }

  zeroGrads(): LayerGrads[] {
    return this.layers.map((layer) => ({
      weights: layer.weights.map((row) => row.map(() => 0.0)),
      bias: layer.bias.map(() => 0.0),
    }));
  }
}

/** Adam with bias correction, one slot per MLP. */
export class Adam {
  private m: LayerGrads[];
  private v: LayerGrads[];
  private t = 0;

  constructor(
    private net: Mlp,
    private lr = 1e-3,
    private beta1 = 0.9,
    private beta2 = 0.999,
    private eps = 1e-8,
  ) {
    this.m = net.zeroGrads();
    this.v = net.zeroGrads();
  }

  step(grads: LayerGrads[], scale: number): void {
    this.t += 1;
    const c1 = 1.0 - Math.pow(this.beta1, this.t);
    const c2 = 1.0 - Math.pow(this.beta2, this.t);
    for (let li = 0; li < this.net.layers.length; li++) {
      const layer = this.net.layers[li];
      for (let r = 0; r < layer.weights.length; r++) {
        for (let c = 0; c < layer.weights[r].length; c++) {
          const g = grads[li].weights[r][c] * scale;
          this.m[li].weights[r][c] = this.beta1 * this.m[li].weights[r][c] + (1 - this.beta1) * g;
          this.v[li].weights[r][c] = this.beta2 * this.v[li].weights[r][c] + (1 - this.beta2) * g * g;
          layer.weights[r][c] -=
            (this.lr * (this.m[li].weights[r][c] / c1)) /
            (Math.sqrt(this.v[li].weights[r][c] / c2) + this.eps);
        }
        const gb = grads[li].bias[r] * scale;
        this.m[li].bias[r] = this.beta1 * this.m[li].bias[r] + (1 - this.beta1) * gb;
        this.v[li].bias[r] = this.beta2 * this.v[li].bias[r] + (1 - this.beta2) * gb * gb;
        layer.bias[r] -=
          (this.lr * (this.m[li].bias[r] / c1)) / (Math.sqrt(this.v[li].bias[r] / c2) + this.eps);
      }
    }
  }
}
