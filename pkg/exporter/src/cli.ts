/**
 * CLI: train a toy VAE and export its generator bundle.
 *
 *   node dist/src/cli.js --out bundles/overfit --overfit --seed 7
 *   node dist/src/cli.js --out bundles/well-trained --seed 7
 */
import { trainAndExport } from "./train.js";

function parseArgs(argv: string[]) {
  const args = {
    dataset: "clusters" as const,
    overfit: false,
    seed: 0,
    outDir: "",
    anchorCount: undefined as number | undefined,
  };
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case "--dataset":
        if (argv[++i] !== "clusters") {
          throw new Error("only the 'clusters' dataset is available");
        }
        break;
      case "--overfit":
        args.overfit = true;
        break;
      case "--seed":
        args.seed = Number(argv[++i]);
        break;
      case "--out":
        args.outDir = argv[++i];
        break;
      case "--anchor-count":
        args.anchorCount = Number(argv[++i]);
        break;
      default:
        throw new Error(`unknown argument ${argv[i]}`);
    }
  }
  if (!args.outDir) {
    throw new Error("--out is required");
  }
  return args;
}

function main(): number {
  let args;
  try {
    args = parseArgs(process.argv.slice(2));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const { paths, meta } = trainAndExport({
      dataset: args.dataset,
      overfit: args.overfit,
      seed: args.seed,
      outDir: args.outDir,
      anchorCount: args.anchorCount,
    });
    console.log(
      `exported ${meta.overfit ? "overfit" : "well-trained"} bundle ` +
        `(train size ${meta.trainSize}, final loss ${meta.finalLoss.toFixed(5)})`,
    );
    console.log(`  generator: ${paths.generator}`);
    console.log(`  anchors:   ${paths.anchors}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

process.exit(main());
