import { existsSync, mkdirSync, readFileSync, readdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { renderAll } from "../src/renderAll.js";
import { tempDir, writeRunGroup, writeSweep, writeToy2d } from "./fixtures.js";

const quiet = () => {};

describe("renderAll", () => {
    it("writes an empty manifest for an empty results directory", () => {
        const results = tempDir();
        const out = tempDir();
        const manifest = renderAll(results, out, quiet);
        expect(manifest.figures).toEqual([]);
        const onDisk = JSON.parse(readFileSync(join(out, "manifest.json"), "utf8"));
        expect(onDisk).toEqual({ figures: [] });
    });

    it("renders curves, entropy, and layer bars for a run directory", () => {
        const results = tempDir();
        writeRunGroup(results, "synth-sgd-zerosum-aaa111", [0, 1, 2]);
        const out = tempDir();
        const manifest = renderAll(results, out, quiet);
        expect(manifest.figures.map((f) => f.output).sort()).toEqual([
            "curves.svg",
            "entropy.svg",
            "layers.svg",
        ]);
        for (const figure of manifest.figures) {
            expect(existsSync(join(out, figure.output))).toBe(true);
            expect(figure.inputs).toEqual([
                "synth-sgd-zerosum-aaa111-seed0.csv",
                "synth-sgd-zerosum-aaa111-seed1.csv",
                "synth-sgd-zerosum-aaa111-seed2.csv",
            ]);
        }
    });

    it("renders one curves figure per optimizer from an optimizer sweep", () => {
        const results = tempDir();
        writeSweep(results, "optimizers", [
            { axisValue: "optimizer=sgd", variant: "none", runPrefix: "cifar10-sgd-none-a1", seeds: [0, 1, 2] },
            { axisValue: "optimizer=sgd", variant: "zerosum", runPrefix: "cifar10-sgd-zerosum-a2", seeds: [0, 1, 2], accuracyBase: 0.36 },
            { axisValue: "optimizer=adam", variant: "none", runPrefix: "cifar10-adam-none-a3", seeds: [0, 1, 2] },
            { axisValue: "optimizer=adam", variant: "zerosum", runPrefix: "cifar10-adam-zerosum-a4", seeds: [0, 1, 2], accuracyBase: 0.33 },
        ]);
        const out = tempDir();
        const manifest = renderAll(results, out, quiet);
        expect(manifest.figures.map((f) => f.output)).toEqual([
            "curves__optimizer-adam.svg",
            "curves__optimizer-sgd.svg",
        ]);
        for (const figure of manifest.figures) {
            const svg = readFileSync(join(out, figure.output), "utf8");
            expect(svg).toContain(">none<");
            expect(svg).toContain(">zerosum<");
            // Both variants carry a seed band.
            expect(svg.match(/<polygon /g)).toHaveLength(2);
        }
    });

    it("is idempotent across reruns", () => {
        const results = tempDir();
        writeRunGroup(join(results, "deep"), "synth-sgd-zerosum-aaa111", [0, 1]);
        writeToy2d(join(results, "toy"));
        const out = tempDir();
        renderAll(results, out, quiet);
        const first = new Map(
            readdirSync(out).map((name) => [name, readFileSync(join(out, name), "utf8")]));
        renderAll(results, out, quiet);
        for (const [name, text] of first) {
            expect(readFileSync(join(out, name), "utf8")).toBe(text);
        }
    });

    it("skips a broken group with a logged diagnostic and renders the rest", () => {
        const results = tempDir();
        const good = writeRunGroup(join(results, "good"), "synth-sgd-zerosum-aaa111", [0]);
        const bad = writeRunGroup(join(results, "bad"), "synth-sgd-none-bbb222", [0]);
        writeFileSync(
            bad[0]!,
            readFileSync(bad[0]!, "utf8").replace("accuracy,", "quality,"),
            "utf8");

        const logged: string[] = [];
        const out = tempDir();
        const manifest = renderAll(results, out, (m) => logged.push(m));

        expect(manifest.figures.map((f) => f.output)).toEqual([
            "good__curves.svg",
            "good__entropy.svg",
            "good__layers.svg",
        ]);
        expect(logged.some((m) => m.includes("missing required column(s): accuracy"))).toBe(true);
        expect(good.every((p) => existsSync(p))).toBe(true);
    });

    it("renders nested groups with directory-derived figure names", () => {
        const results = tempDir();
        writeRunGroup(join(results, "runs", "deep"), "synth-sgd-zerosum-aaa111", [0]);
        writeToy2d(join(results, "toy"));
        const out = tempDir();
        const manifest = renderAll(results, out, quiet);
        expect(manifest.figures.map((f) => f.output)).toEqual([
            "runs__deep__curves.svg",
            "runs__deep__entropy.svg",
            "runs__deep__layers.svg",
            "toy__toy2d.svg",
        ]);
    });
});

describe("cli", () => {
    it("prints usage and exits 2 on a bad invocation", () => {
        const logged: string[] = [];
        expect(main([], (m) => logged.push(m))).toBe(2);
        expect(main(["render-all"], quiet)).toBe(2);
        expect(main(["render-all", "--results", "x"], quiet)).toBe(2);
        expect(main(["frobnicate", "--results", "x", "--out", "y"], quiet)).toBe(2);
        expect(main(["render-all", "--results", "x", "--out", "y", "--frob"], quiet)).toBe(2);
        expect(logged.some((m) => m.includes("usage:"))).toBe(true);
    });

    it("exits 1 when the results path is not a directory", () => {
        const logged: string[] = [];
        const code = main(
            ["render-all", "--results", join(tempDir(), "missing"), "--out", tempDir()],
            (m) => logged.push(m));
        expect(code).toBe(1);
        expect(logged.some((m) => m.includes("not a directory"))).toBe(true);
    });

    it("exits 0 and writes the manifest on an empty directory", () => {
        const results = tempDir();
        const out = join(tempDir(), "figs");
        expect(main(["render-all", "--results", results, "--out", out], quiet)).toBe(0);
        expect(JSON.parse(readFileSync(join(out, "manifest.json"), "utf8"))).toEqual({ figures: [] });
    });

    it("renders a populated directory end to end", () => {
        const results = tempDir();
        writeRunGroup(results, "synth-adam-expdiff-ccc333", [0, 1]);
        const out = join(tempDir(), "figs");
        expect(main(["render-all", "--results", results, "--out", out], quiet)).toBe(0);
        const manifest = JSON.parse(readFileSync(join(out, "manifest.json"), "utf8"));
        expect(manifest.figures).toHaveLength(3);
    });

    it("keeps going when one group is malformed", () => {
        const results = tempDir();
        writeRunGroup(join(results, "ok"), "synth-sgd-zerosum-aaa111", [0]);
        mkdirSync(join(results, "odd"));
        writeFileSync(join(results, "odd", "summary.json"), "{}", "utf8");
        writeFileSync(join(results, "odd", "metrics.csv"), "just,some,junk\n1,2,3\n", "utf8");
        const logged: string[] = [];
        const out = join(tempDir(), "figs");
        expect(main(["render-all", "--results", results, "--out", out], (m) => logged.push(m))).toBe(0);
        expect(logged.some((m) => m.startsWith("skip"))).toBe(true);
        const manifest = JSON.parse(readFileSync(join(out, "manifest.json"), "utf8"));
        expect(manifest.figures.map((f: { output: string }) => f.output)).toEqual([
            "ok__curves.svg",
            "ok__entropy.svg",
            "ok__layers.svg",
        ]);
    });
});
