/**
 * Toy dataset: 2-D Gaussian clusters inside [-1, 1]^2, interleaved by
 * cluster so any prefix stays class-balanced.
 */
import { Rng } from "./rng.js";

export interface LabeledPoint {
  x: number[];
  label: string;
}

// centers sit close to the tanh rails, like real data normalized to [-1, 1];
// a decoder that memorizes them saturates and plateaus around each code
const CLUSTER_CENTERS: number[][] = [
  [-0.85, -0.85],
  [0.85, -0.85],
  [-0.85, 0.85],
  [0.85, 0.85],
];

export function makeClusters(seed: number, perCluster: number, noise = 0.05): LabeledPoint[] {
  const rng = new Rng(seed);
  const points: LabeledPoint[] = [];
  for (let i = 0; i < perCluster; i++) {
    for (let c = 0; c < CLUSTER_CENTERS.length; c++) {
      const center = CLUSTER_CENTERS[c];
      points.push({
        x: [center[0] + noise * rng.normal(), center[1] + noise * rng.normal()],
        label: `cluster${c}`,
      });
    }
  }
  return points;
}
