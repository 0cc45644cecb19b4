import { readFileSync } from "node:fs";
import { basename } from "node:path";
import Papa from "papaparse";

import {
    BASE_COLUMNS,
    MetricsFile,
    MetricsRow,
    TOY2D_COLUMNS,
    Toy2dFile,
    Toy2dRow,
    stripSeedSuffix,
} from "./schema.js";

export class SchemaError extends Error {}

type RawRow = Record<string, string>;

function parseRaw(path: string): { fields: string[]; rows: RawRow[] } {
    const text = readFileSync(path, "utf8");
    const parsed = Papa.parse<RawRow>(text, {
        header: true,
        skipEmptyLines: true,
    });
    const hardErrors = parsed.errors.filter((e) => e.type !== "FieldMismatch");
    if (hardErrors.length > 0) {
        const first = hardErrors[0]!;
        throw new SchemaError(`${path}: malformed CSV: ${first.message}`);
    }
    const fields = parsed.meta.fields ?? [];
    return { fields, rows: parsed.data };
}

function requireColumns(path: string, fields: string[], required: readonly string[]): void {
    const present = new Set(fields);
    const missing = required.filter((c) => !present.has(c));
    if (missing.length > 0) {
        throw new SchemaError(`${path}: missing required column(s): ${missing.join(", ")}`);
    }
}

function requireRows(path: string, rows: unknown[]): void {
    if (rows.length === 0) {
        throw new SchemaError(`${path}: no data rows`);
    }
}

function toNumber(path: string, column: string, raw: string | undefined): number {
    const value = Number(raw);
    if (raw === undefined || raw === "" || Number.isNaN(value)) {
        throw new SchemaError(`${path}: column ${column}: expected a number, got ${JSON.stringify(raw ?? "")}`);
    }
    return value;
}

function toOptionalNumber(path: string, column: string, raw: string | undefined): number | null {
    if (raw === undefined || raw === "") {
        return null;
    }
    return toNumber(path, column, raw);
}

// Layered columns are named <stem>_<layer index>; layers are contiguous from 0.
function layerCount(fields: string[], stem: string): number {
    const indices = fields
        .map((f) => {
            const m = f.match(new RegExp(`^${stem}_(\\d+)$`));
            return m ? Number(m[1]) : null;
        })
        .filter((i): i is number => i !== null);
    return indices.length > 0 ? Math.max(...indices) + 1 : 0;
}

export function readMetricsCsv(path: string): MetricsFile {
    const { fields, rows } = parseRaw(path);
    requireColumns(path, fields, BASE_COLUMNS);
    requireRows(path, rows);

    const layers = layerCount(fields, "entropy");
    const specLayers = layerCount(fields, "specialization");

    const parsedRows: MetricsRow[] = rows.map((raw) => {
        const split = raw["split"];
        if (split !== "train" && split !== "dev") {
            throw new SchemaError(`${path}: column split: expected train or dev, got ${JSON.stringify(split ?? "")}`);
        }
        return {
            runId: raw["run_id"] ?? "",
            seed: toNumber(path, "seed", raw["seed"]),
            epoch: toNumber(path, "epoch", raw["epoch"]),
            step: toNumber(path, "step", raw["step"]),
            split,
            loss: toNumber(path, "loss", raw["loss"]),
            accuracy: toNumber(path, "accuracy", raw["accuracy"]),
            lr: toNumber(path, "lr", raw["lr"]),
            entropy: Array.from({ length: layers }, (_, i) =>
                toOptionalNumber(path, `entropy_${i}`, raw[`entropy_${i}`])),
            specialization: Array.from({ length: specLayers }, (_, i) =>
                toOptionalNumber(path, `specialization_${i}`, raw[`specialization_${i}`])),
        };
    });

    const runPrefix = stripSeedSuffix(parsedRows[0]!.runId);
    return {
        path,
        runPrefix,
        entropyLayers: layers,
        specializationLayers: specLayers,
        rows: parsedRows,
    };
}

export function readToy2dCsv(path: string): Toy2dFile {
    const { fields, rows } = parseRaw(path);
    requireColumns(path, fields, TOY2D_COLUMNS);
    requireRows(path, rows);

    const parsedRows: Toy2dRow[] = rows.map((raw) => ({
        step: toNumber(path, "step", raw["step"]),
        w0: toNumber(path, "w0", raw["w0"]),
        w1: toNumber(path, "w1", raw["w1"]),
        loss: toNumber(path, "loss", raw["loss"]),
    }));

    const name = basename(path).replace(/^toy2d_/, "").replace(/\.csv$/, "");
    return { path, name, rows: parsedRows };
}
