// Column contract for the CSV files the training harness writes.

export const BASE_COLUMNS = [
    "run_id",
    "seed",
    "epoch",
    "step",
    "split",
    "loss",
    "accuracy",
    "lr",
] as const;

export const TOY2D_COLUMNS = ["step", "w0", "w1", "loss"] as const;

export interface MetricsRow {
    runId: string;
    seed: number;
    epoch: number;
    step: number;
    split: "train" | "dev";
    loss: number;
    accuracy: number;
    lr: number;
    // Per-layer columns (entropy_0, specialization_0, ...), indexed by layer.
    // A value is null on rows where the harness leaves the field empty.
    entropy: (number | null)[];
    specialization: (number | null)[];
}

export interface MetricsFile {
    path: string;
    // Run id with the trailing "-seed<N>" stripped; seeds of one experiment
    // share this prefix.
    runPrefix: string;
    entropyLayers: number;
    specializationLayers: number;
    rows: MetricsRow[];
}

export interface Toy2dRow {
    step: number;
    w0: number;
    w1: number;
    loss: number;
}

export interface Toy2dFile {
    path: string;
    // Taken from the file name: toy2d_<name>.csv.
    name: string;
    rows: Toy2dRow[];
}

export function stripSeedSuffix(runId: string): string {
    return runId.replace(/-seed\d+$/, "");
}
