import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { FigureSpec, render, renderToString } from "../src/figures.js";
import { tempDir, writeRunGroup, writeToy2d } from "./fixtures.js";

function polygons(svg: string): string[] {
    return svg.match(/<polygon [^>]*>/g) ?? [];
}

function polylines(svg: string): string[] {
    return svg.match(/<polyline [^>]*>/g) ?? [];
}

function pointPairs(element: string): [number, number][] {
    const match = element.match(/points="([^"]*)"/);
    return match![1]!.split(" ").map((pair) => {
        const [x, y] = pair.split(",").map(Number);
        return [x!, y!];
    });
}

describe("curves", () => {
    function curvesSpec(dir: string, seeds: number[]): FigureSpec {
        const inputs = writeRunGroup(join(dir, "run"), "synth-sgd-zerosum-aaa111", seeds);
        return { kind: "curves", inputs, output: join(dir, "curves.svg") };
    }

    it("draws a mean line with a min/max band across seeds", () => {
        const dir = tempDir();
        const svg = renderToString(curvesSpec(dir, [0, 1, 2]));
        const [band] = polygons(svg);
        const [line] = polylines(svg);
        expect(band).toBeDefined();
        expect(line).toBeDefined();

        // Seed accuracies differ by construction, so at each x the band's
        // upper edge sits strictly above its lower edge (smaller y).
        const points = pointPairs(band!);
        const half = points.length / 2;
        const upper = points.slice(0, half);
        const lower = points.slice(half).reverse();
        upper.forEach(([x, y], i) => {
            expect(x).toBe(lower[i]![0]);
            expect(y).toBeLessThan(lower[i]![1]);
        });

        // The mean line runs inside the band.
        const mean = pointPairs(line!);
        mean.forEach(([, y], i) => {
            expect(y).toBeGreaterThanOrEqual(upper[i]![1]);
            expect(y).toBeLessThanOrEqual(lower[i]![1]);
        });
    });

    it("collapses the band onto the line for a single seed", () => {
        const dir = tempDir();
        const svg = renderToString(curvesSpec(dir, [0]));
        const points = pointPairs(polygons(svg)[0]!);
        const half = points.length / 2;
        const upper = points.slice(0, half);
        const lower = points.slice(half).reverse();
        upper.forEach(([x, y], i) => {
            expect(x).toBe(lower[i]![0]);
            expect(y).toBe(lower[i]![1]);
        });
    });

    it("is deterministic and writes the output file", () => {
        const dir = tempDir();
        const spec = curvesSpec(dir, [0, 1]);
        render(spec);
        const first = readFileSync(spec.output, "utf8");
        render(spec);
        expect(readFileSync(spec.output, "utf8")).toBe(first);
        expect(first).toContain("<svg");
    });

    it("does not modify the input files", () => {
        const dir = tempDir();
        const spec = curvesSpec(dir, [0, 1]);
        const before = spec.inputs.map((p) => readFileSync(p, "utf8"));
        render(spec);
        spec.inputs.forEach((p, i) => {
            expect(readFileSync(p, "utf8")).toBe(before[i]);
        });
    });

    it("fails with the column name when the schema does not match", () => {
        const dir = tempDir();
        const spec = curvesSpec(dir, [0]);
        const broken = readFileSync(spec.inputs[0]!, "utf8").replace("accuracy,", "quality,");
        writeFileSync(spec.inputs[0]!, broken, "utf8");
        expect(() => renderToString(spec)).toThrowError(/missing required column\(s\): accuracy/);
    });

    it("labels series by variant and honors the label map", () => {
        const dir = tempDir();
        const vanilla = writeRunGroup(join(dir, "a"), "synth-sgd-none-aaa111", [0]);
        const excited = writeRunGroup(join(dir, "b"), "synth-sgd-zerosum-bbb222", [0]);
        const spec: FigureSpec = {
            kind: "curves",
            inputs: [...vanilla, ...excited],
            output: join(dir, "curves.svg"),
        };
        const svg = renderToString(spec);
        expect(svg).toContain(">none<");
        expect(svg).toContain(">zerosum<");

        const labeled = renderToString({
            ...spec,
            labels: { "synth-sgd-none-aaa111": "vanilla sgd" },
        });
        expect(labeled).toContain(">vanilla sgd<");
    });

    it("rejects an empty input list", () => {
        expect(() => renderToString({ kind: "curves", inputs: [], output: "x.svg" }))
            .toThrowError(/no input files/);
    });
});

describe("entropy", () => {
    it("draws one line per layer", () => {
        const dir = tempDir();
        const inputs = writeRunGroup(join(dir, "run"), "synth-sgd-zerosum-aaa111", [0, 1], { layers: 3 });
        const svg = renderToString({ kind: "entropy", inputs, output: join(dir, "entropy.svg") });
        expect(polylines(svg)).toHaveLength(3);
        expect(svg).toContain(">layer 0<");
        expect(svg).toContain(">layer 2<");
    });

    it("names the entropy column when none exist", () => {
        const dir = tempDir();
        const inputs = writeRunGroup(join(dir, "run"), "synth-sgd-zerosum-aaa111", [0]);
        for (const path of inputs) {
            const text = readFileSync(path, "utf8")
                .replace(/entropy_/g, "h_");
            writeFileSync(path, text, "utf8");
        }
        expect(() => renderToString({ kind: "entropy", inputs, output: join(dir, "e.svg") }))
            .toThrowError(/missing required column\(s\): entropy_0/);
    });
});

describe("layer_bars", () => {
    it("draws one bar per layer with min/max whiskers across seeds", () => {
        const dir = tempDir();
        const inputs = writeRunGroup(join(dir, "run"), "synth-sgd-zerosum-aaa111", [0, 1], { layers: 4 });
        const svg = renderToString({ kind: "layer_bars", inputs, output: join(dir, "bars.svg") });
        // Background, four bars, one legend swatch.
        expect(svg.match(/<rect /g)).toHaveLength(6);
        // Whiskers: one vertical line per layer beyond the axes and ticks.
        const whiskers = (svg.match(/<line [^>]*stroke="#333333"/g) ?? []).length;
        expect(whiskers).toBeGreaterThanOrEqual(4);
    });
});

describe("toy2d", () => {
    it("draws one trajectory per file with start and end markers", () => {
        const dir = tempDir();
        const inputs = writeToy2d(join(dir, "toy"), ["sgd", "sgd_momentum", "excited_zerosum"]);
        const svg = renderToString({ kind: "toy2d", inputs, output: join(dir, "toy2d.svg") });
        expect(polylines(svg)).toHaveLength(3);
        expect(svg.match(/<circle /g)).toHaveLength(9);
        expect(svg).toContain(">sgd<");
        expect(svg).toContain(">excited_zerosum<");
    });

    it("uses a distinct color per trajectory", () => {
        const dir = tempDir();
        const inputs = writeToy2d(join(dir, "toy"), ["a", "b"]);
        const svg = renderToString({ kind: "toy2d", inputs, output: join(dir, "toy2d.svg") });
        const strokes = polylines(svg).map((p) => p.match(/stroke="([^"]*)"/)![1]);
        expect(new Set(strokes).size).toBe(2);
    });
});
