/**
 * Bundle writer: serializes a decoder into the JSON interchange format the
 * analysis package loads, alongside the anchors file (encoder means of
 * training samples) and bundle metadata.
 *
 * JSON numbers are written with JavaScript's shortest round-trip
 * representation, which parses back to the identical float64.
 */
import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { DenseLayer, Mlp } from "./mlp.js";
import { Rng } from "./rng.js";
import { LabeledPoint } from "./data.js";
import { Vae } from "./vae.js";

export interface ReferencePair {
  z: number[];
  x: number[];
}

export interface NetworkDocument {
  latent_dim: number;
  output_dim: number;
  layers: { weights: number[][]; bias: number[]; activation: string }[];
  reference_io: ReferencePair[];
}

export interface BundlePaths {
  generator: string;
  anchors: string;
  meta: string;
}

export function networkDocument(decoder: Mlp, latentDim: number, outputDim: number, referenceIo: ReferencePair[]): NetworkDocument {
  return {
    latent_dim: latentDim,
    output_dim: outputDim,
    layers: decoder.layers.map((layer: DenseLayer) => ({
      weights: layer.weights.map((row) => row.slice()),
      bias: layer.bias.slice(),
      activation: layer.activation,
    })),
    reference_io: referenceIo,
  };
}

export function referencePairs(decoder: Mlp, latentDim: number, count: number, seed: number): ReferencePair[] {
  const rng = new Rng(seed);
  const pairs: ReferencePair[] = [];
  for (let i = 0; i < count; i++) {
    const z = rng.normalVector(latentDim);
    pairs.push({ z, x: decoder.forward(z) });
  }
  return pairs;
}

export interface BundleMeta {
  dataset: string;
  overfit: boolean;
  seed: number;
  trainSize: number;
  steps: number;
  finalLoss: number;
  architecture: string;
  klWeight: number;
}

export function writeBundle(
  outDir: string,
  vae: Vae,
  trainSet: LabeledPoint[],
  anchorCount: number,
  meta: BundleMeta,
): BundlePaths {
  mkdirSync(outDir, { recursive: true });

  const referenceIo = referencePairs(vae.decoder, vae.latentDim, 8, meta.seed + 1);
  const generator = networkDocument(vae.decoder, vae.latentDim, vae.inputDim, referenceIo);

  const anchors = trainSet.slice(0, Math.min(anchorCount, trainSet.length)).map((point) => ({
    z: vae.encodeMean(point.x),
    label: point.label,
  }));

  const paths: BundlePaths = {
    generator: join(outDir, "generator.json"),
    anchors: join(outDir, "anchors.json"),
    meta: join(outDir, "meta.json"),
  };
  writeFileSync(paths.generator, JSON.stringify(generator, null, 2) + "\n");
  writeFileSync(paths.anchors, JSON.stringify(anchors, null, 2) + "\n");
  writeFileSync(paths.meta, JSON.stringify(meta, null, 2) + "\n");
  return paths;
}
