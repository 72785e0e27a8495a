import { execFileSync } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface PrimaryResult {
  status: number;
  stdout: string;
  stderr: string;
}

/** Invoke the analysis CLI (the Python package) and capture its output. */
export function runPrimary(args: string[]): PrimaryResult {
  try {
    const stdout = execFileSync("python3", ["-m", "gendensity", ...args], {
      encoding: "utf-8",
      stdio: ["ignore", "pipe", "pipe"],
    });
    return { status: 0, stdout, stderr: "" };
  } catch (err) {
    const failure = err as { status?: number; stdout?: string; stderr?: string };
    return {
      status: failure.status ?? 1,
      stdout: failure.stdout?.toString() ?? "",
      stderr: failure.stderr?.toString() ?? "",
    };
  }
}

export function scoreBundle(dir: string): { meanDip: number; meanDecay: number } {
  const result = runPrimary([
    "score",
    "--generator", join(dir, "generator.json"),
    "--anchors", join(dir, "anchors.json"),
    "--format", "json",
  ]);
  if (result.status !== 0) {
    throw new Error(`primary score failed: ${result.stderr}`);
  }
  const report = JSON.parse(result.stdout).report;
  return { meanDip: report.mean_dip, meanDecay: report.mean_decay };
}

export function tempDir(prefix: string): string {
  return mkdtempSync(join(tmpdir(), prefix));
}
