/**
 * Train-and-export entry points: an overfit bundle (tiny training subset)
 * and a well-trained one (full toy set), identical architectures.
 */
import { makeClusters, LabeledPoint } from "./data.js";
import { Rng } from "./rng.js";
import { Vae, DEFAULT_OPTIONS, VaeOptions } from "./vae.js";
import { writeBundle, BundlePaths, BundleMeta } from "./export.js";

export interface TrainExportRequest {
  dataset: "clusters";
  overfit: boolean;
  seed: number;
  outDir: string;
  anchorCount?: number;
  options?: Partial<VaeOptions>;
}

export interface TrainExportResult {
  paths: BundlePaths;
  meta: BundleMeta;
}

// One training sample per cluster for the overfit run: its nearest-neighbor
// anchor paths then cross between genuinely distant memorized outputs, where
// the crossfade valley lives.  Both regimes share every hyperparameter; only
// the training set differs.
const FULL_PER_CLUSTER = 100;
const OVERFIT_SUBSET = 4;
const FULL_STEPS = 12000;
const OVERFIT_STEPS = 12000;

export function trainAndExport(request: TrainExportRequest): TrainExportResult {
  if (request.dataset !== "clusters") {
    throw new Error(`unknown dataset ${request.dataset}`);
  }
  const options: VaeOptions = { ...DEFAULT_OPTIONS, ...request.options };
  const full = makeClusters(request.seed, FULL_PER_CLUSTER);
  const trainSet: LabeledPoint[] = request.overfit ? full.slice(0, OVERFIT_SUBSET) : full;
  const steps = request.overfit ? OVERFIT_STEPS : FULL_STEPS;
  const batchSize = request.overfit ? trainSet.length : 32;

  const vae = new Vae(new Rng(request.seed + 17), 2, options);
  const result = vae.train(
    trainSet.map((point) => point.x),
    steps,
    batchSize,
    request.seed + 29,
    options.klWeight,
    options.learningRate,
  );
  if (!Number.isFinite(result.finalLoss)) {
    throw new Error(`training diverged after ${result.steps} steps`);
  }

  const meta: BundleMeta = {
    dataset: request.dataset,
    overfit: request.overfit,
    seed: request.seed,
    trainSize: trainSet.length,
    steps: result.steps,
    finalLoss: result.finalLoss,
    architecture: `dense 2-${options.hidden}-${options.hidden}-${options.latentDim} / ${options.latentDim}-${options.hidden}-${options.hidden}-2 tanh out`,
    klWeight: options.klWeight,
  };
  const anchorCount = request.anchorCount ?? (request.overfit ? trainSet.length : 12);
  const paths = writeBundle(request.outDir, vae, trainSet, anchorCount, meta);
  return { paths, meta };
}
