import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { SchemaError, readMetricsCsv, readToy2dCsv } from "../src/csv.js";
import { metricsHeader, runCsvText, tempDir, writeToy2d } from "./fixtures.js";

function writeCsv(text: string): string {
    const path = join(tempDir(), "metrics.csv");
    writeFileSync(path, text, "utf8");
    return path;
}

describe("readMetricsCsv", () => {
    it("parses rows, layers, and the run prefix", () => {
        const path = writeCsv(runCsvText("synth-sgd-zerosum-abc123", 0, { layers: 3, steps: 4 }));
        const file = readMetricsCsv(path);
        expect(file.runPrefix).toBe("synth-sgd-zerosum-abc123");
        expect(file.entropyLayers).toBe(3);
        expect(file.specializationLayers).toBe(3);
        expect(file.rows).toHaveLength(8);
        expect(file.rows.filter((r) => r.split === "dev")).toHaveLength(4);
    });

    it("leaves per-layer fields null where the harness writes them empty", () => {
        const path = writeCsv(runCsvText("synth-sgd-none-abc123", 1));
        const file = readMetricsCsv(path);
        const train = file.rows.find((r) => r.split === "train")!;
        const dev = file.rows.find((r) => r.split === "dev")!;
        expect(train.entropy).toEqual([null, null]);
        expect(dev.entropy[0]).toBeTypeOf("number");
        expect(dev.specialization[1]).toBeTypeOf("number");
    });

    it("names a missing column in the diagnostic", () => {
        const text = runCsvText("synth-sgd-none-abc123", 0)
            .replace("accuracy,", "quality,");
        const path = writeCsv(text);
        expect(() => readMetricsCsv(path)).toThrowError(SchemaError);
        expect(() => readMetricsCsv(path)).toThrowError(/missing required column\(s\): accuracy/);
    });

    it("names every missing column when several are gone", () => {
        const lines = runCsvText("synth-sgd-none-abc123", 0).split("\n");
        const header = metricsHeader(2)
            .replace("loss,accuracy,", "")
            .split(",");
        const rows = lines.slice(1, -1).map((line) => {
            const cells = line.split(",");
            cells.splice(5, 2);
            return cells.join(",");
        });
        const path = writeCsv([header.join(","), ...rows].join("\n") + "\n");
        expect(() => readMetricsCsv(path)).toThrowError(/missing required column\(s\): loss, accuracy/);
    });

    it("rejects a file with no data rows", () => {
        const path = writeCsv(metricsHeader(2) + "\n");
        expect(() => readMetricsCsv(path)).toThrowError(/no data rows/);
    });

    it("names the column when a numeric field does not parse", () => {
        const text = runCsvText("synth-sgd-none-abc123", 0).replace("dev,1.", "dev,oops1.");
        const path = writeCsv(text);
        expect(() => readMetricsCsv(path)).toThrowError(/column loss: expected a number/);
    });

    it("rejects an unknown split value", () => {
        const text = runCsvText("synth-sgd-none-abc123", 0).replace(",dev,", ",test,");
        const path = writeCsv(text);
        expect(() => readMetricsCsv(path)).toThrowError(/column split/);
    });

    it("does not modify the input file", () => {
        const path = writeCsv(runCsvText("synth-sgd-none-abc123", 0));
        const before = readFileSync(path, "utf8");
        readMetricsCsv(path);
        expect(readFileSync(path, "utf8")).toBe(before);
    });
});

describe("readToy2dCsv", () => {
    it("parses a trajectory and takes its name from the file name", () => {
        const [path] = writeToy2d(tempDir(), ["sgd_momentum"]);
        const file = readToy2dCsv(path!);
        expect(file.name).toBe("sgd_momentum");
        expect(file.rows).toHaveLength(11);
        expect(file.rows[0]).toEqual({ step: 0, w0: -1, w1: -0.1, loss: 1 });
    });

    it("names a missing trajectory column", () => {
        const [path] = writeToy2d(tempDir(), ["sgd"]);
        const text = readFileSync(path!, "utf8").replace("step,w0,w1,loss", "step,a,w1,loss");
        writeFileSync(path!, text, "utf8");
        expect(() => readToy2dCsv(path!)).toThrowError(/missing required column\(s\): w0/);
    });
});
