import { mkdirSync, writeFileSync } from "node:fs";
import { join, relative, sep } from "node:path";

import { Group, SweepGroup, discover } from "./discover.js";
import { FigureKind, FigureSpec, render } from "./figures.js";

export interface ManifestEntry {
    kind: FigureKind;
    // Input CSVs relative to the results directory, sorted.
    inputs: string[];
    // Output file relative to the output directory.
    output: string;
}

export interface Manifest {
    figures: ManifestEntry[];
}

export type Logger = (message: string) => void;

function slug(text: string): string {
    return text.replace(/[=/]/g, "-").replace(/[^A-Za-z0-9._-]+/g, "-");
}

function figureName(relDir: string, base: string): string {
    if (relDir === ".") {
        return `${base}.svg`;
    }
    return `${relDir.split("/").map(slug).join("__")}__${base}.svg`;
}

function rel(resultsDir: string, paths: string[]): string[] {
    return paths.map((p) => relative(resultsDir, p).split(sep).join("/")).sort();
}

interface PlannedFigure {
    spec: FigureSpec;
    entry: ManifestEntry;
}

function planGroup(group: Group, resultsDir: string, outDir: string): PlannedFigure[] {
    const planned: PlannedFigure[] = [];
    const add = (kind: FigureKind, inputs: string[], base: string, title?: string) => {
        const output = figureName(group.relDir, base);
        planned.push({
            spec: { kind, inputs, output: join(outDir, output), title },
            entry: { kind, inputs: rel(resultsDir, inputs), output },
        });
    };

    if (group.kind === "run") {
        add("curves", group.csvs, "curves");
        add("entropy", group.csvs, "entropy");
        add("layer_bars", group.csvs, "layers");
        return planned;
    }
    if (group.kind === "toy2d") {
        const trajectories = group.csvs.filter((c) => /(^|\/)toy2d_[^/]+\.csv$/.test(c));
        add("toy2d", trajectories, "toy2d");
        return planned;
    }
    planSweep(group, add);
    return planned;
}

// One curves figure per axis value, overlaying that value's vanilla and
// excited cells; each series keeps its own seed band.
function planSweep(
    group: SweepGroup,
    add: (kind: FigureKind, inputs: string[], base: string, title?: string) => void,
): void {
    const axisValues: string[] = [];
    for (const cell of group.cells) {
        if (!axisValues.includes(cell.axisValue)) {
            axisValues.push(cell.axisValue);
        }
    }
    for (const axisValue of axisValues) {
        const cells = group.cells.filter((c) => c.axisValue === axisValue);
        const inputs = cells.flatMap((c) => c.csvs);
        if (inputs.length === 0) {
            continue;
        }
        add("curves", inputs, `curves__${slug(axisValue)}`, `Dev accuracy, ${axisValue}`);
    }
}

export function renderAll(resultsDir: string, outDir: string, log: Logger = console.error): Manifest {
    const groups = discover(resultsDir);
    mkdirSync(outDir, { recursive: true });

    const entries: ManifestEntry[] = [];
    for (const group of groups) {
        let planned: PlannedFigure[];
        try {
            planned = planGroup(group, resultsDir, outDir);
        } catch (error) {
            log(`skip ${group.relDir}: ${(error as Error).message}`);
            continue;
        }
        for (const figure of planned) {
            try {
                render(figure.spec);
                entries.push(figure.entry);
            } catch (error) {
                log(`skip ${figure.entry.output}: ${(error as Error).message}`);
            }
        }
    }

    entries.sort((a, b) => a.output.localeCompare(b.output));
    const manifest: Manifest = { figures: entries };
    writeFileSync(join(outDir, "manifest.json"), JSON.stringify(manifest, null, 2) + "\n", "utf8");
    return manifest;
}
