// Builders that fabricate result directories with the exact file layout
// and CSV schema the training harness writes.

import { mkdirSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export function tempDir(): string {
    return mkdtempSync(join(tmpdir(), "plots-test-"));
}

export function metricsHeader(layers: number): string {
    const base = ["run_id", "seed", "epoch", "step", "split", "loss", "accuracy", "lr"];
    for (let i = 0; i < layers; i += 1) {
        base.push(`entropy_${i}`, `specialization_${i}`, `phi_min_${i}`, `phi_mean_${i}`, `phi_max_${i}`);
    }
    return base.join(",");
}

export interface RunCsvOptions {
    layers?: number;
    steps?: number;
    // Base dev accuracy ramp; seed and step offsets are added on top.
    accuracyBase?: number;
}

export function runCsvText(runPrefix: string, seed: number, options: RunCsvOptions = {}): string {
    const layers = options.layers ?? 2;
    const steps = options.steps ?? 6;
    const accuracyBase = options.accuracyBase ?? 0.3;
    const runId = `${runPrefix}-seed${seed}`;
    const lines = [metricsHeader(layers)];
    for (let step = 1; step <= steps; step += 1) {
        const progress = step / steps;
        const trainLoss = 2.0 - 1.5 * progress + 0.01 * seed;
        const trainAcc = 0.1 + 0.5 * progress;
        const lr = 0.1 * (1 - progress / 2);
        const trainCells = [runId, seed, step - 1, step, "train", trainLoss, trainAcc, lr];
        for (let i = 0; i < layers; i += 1) {
            trainCells.push("", "", 0.5, 1.0, 1.5);
        }
        lines.push(trainCells.join(","));

        const devLoss = 1.8 - 1.4 * progress + 0.01 * seed;
        const devAcc = accuracyBase + 0.5 * progress + 0.02 * seed;
        const devCells = [runId, seed, step - 1, step, "dev", devLoss, devAcc, lr];
        for (let i = 0; i < layers; i += 1) {
            const entropy = 3.0 - progress - 0.2 * i + 0.01 * seed;
            const specialization = 0.2 + 0.3 * progress + 0.1 * i + 0.01 * seed;
            devCells.push(entropy, specialization, "", "", "");
        }
        lines.push(devCells.join(","));
    }
    return lines.join("\n") + "\n";
}

export function writeRunGroup(
    dir: string,
    runPrefix: string,
    seeds: number[],
    options: RunCsvOptions = {},
): string[] {
    mkdirSync(dir, { recursive: true });
    const csvs: string[] = [];
    for (const seed of seeds) {
        const path = join(dir, `${runPrefix}-seed${seed}.csv`);
        writeFileSync(path, runCsvText(runPrefix, seed, options), "utf8");
        csvs.push(path);
    }
    const summary = {
        config: { seeds },
        config_hash: "fixture",
        dev_accuracy: { mean: 0.5, std: 0.0, n: seeds.length },
        runs: seeds.map((seed) => ({
            run_id: `${runPrefix}-seed${seed}`,
            seed,
            csv: `${runPrefix}-seed${seed}.csv`,
        })),
    };
    writeFileSync(join(dir, "summary.json"), JSON.stringify(summary, null, 2) + "\n", "utf8");
    return csvs;
}

export interface SweepCellFixture {
    axisValue: string;
    variant: string;
    runPrefix: string;
    seeds: number[];
    accuracyBase?: number;
}

function cellSlug(label: string): string {
    return label.replace(/\//g, "_").replace(/=/g, "-");
}

export function writeSweep(dir: string, preset: string, cells: SweepCellFixture[]): void {
    mkdirSync(dir, { recursive: true });
    const summaryCells = cells.map((cell) => {
        const label = `${cell.axisValue}/${cell.variant}`;
        const cellDir = cellSlug(label);
        writeRunGroup(join(dir, cellDir), cell.runPrefix, cell.seeds, {
            accuracyBase: cell.accuracyBase,
        });
        return {
            cell: label,
            axis_value: cell.axisValue,
            variant: cell.variant,
            mean: 0.5,
            std: 0.0,
            n: cell.seeds.length,
            diverged_seeds: [],
            dir: cellDir,
            delta: null,
        };
    });
    const summary = { preset, cells: summaryCells };
    writeFileSync(join(dir, "sweep_summary.json"), JSON.stringify(summary, null, 2) + "\n", "utf8");
}

export function writeToy2d(dir: string, names: string[] = ["sgd", "excited_zerosum"]): string[] {
    mkdirSync(dir, { recursive: true });
    const csvs: string[] = [];
    names.forEach((name, n) => {
        const lines = ["step,w0,w1,loss"];
        for (let step = 0; step <= 10; step += 1) {
            const shrink = Math.pow(0.8 - 0.05 * n, step);
            lines.push(`${step},${-1 * shrink},${-0.1 * shrink},${shrink * shrink}`);
        }
        const path = join(dir, `toy2d_${name}.csv`);
        writeFileSync(path, lines.join("\n") + "\n", "utf8");
        csvs.push(path);
    });
    const meta = { variant: "zerosum", gamma: 1.0, multipliers: [1.5, 0.5] };
    writeFileSync(join(dir, "toy2d_meta.json"), JSON.stringify(meta, null, 2) + "\n", "utf8");
    return csvs;
}
