import { readFileSync, readdirSync, statSync } from "node:fs";
import { join, relative, sep } from "node:path";

export interface RunGroup {
    kind: "run";
    dir: string;
    relDir: string;
    csvs: string[];
}

export interface SweepCell {
    cell: string;
    axisValue: string;
    variant: string;
    dir: string;
    csvs: string[];
}

export interface SweepGroup {
    kind: "sweep";
    dir: string;
    relDir: string;
    preset: string;
    cells: SweepCell[];
}

export interface Toy2dGroup {
    kind: "toy2d";
    dir: string;
    relDir: string;
    csvs: string[];
}

export type Group = RunGroup | SweepGroup | Toy2dGroup;

function listDir(dir: string): { files: string[]; dirs: string[] } {
    const files: string[] = [];
    const dirs: string[] = [];
    for (const name of readdirSync(dir).sort()) {
        const path = join(dir, name);
        if (statSync(path).isDirectory()) {
            dirs.push(path);
        } else {
            files.push(path);
        }
    }
    return { files, dirs };
}

function csvsIn(files: string[]): string[] {
    return files.filter((f) => f.endsWith(".csv"));
}

function readSweepSummary(dir: string, path: string): SweepGroup["cells"] {
    const summary = JSON.parse(readFileSync(path, "utf8")) as {
        cells?: { cell?: string; axis_value?: string; variant?: string; dir?: string }[];
    };
    const cells: SweepCell[] = [];
    for (const cell of summary.cells ?? []) {
        if (!cell.dir || !cell.axis_value || !cell.variant) {
            continue;
        }
        const cellDir = join(dir, cell.dir);
        let csvs: string[] = [];
        try {
            csvs = csvsIn(listDir(cellDir).files);
        } catch {
            continue;
        }
        cells.push({
            cell: cell.cell ?? cell.dir,
            axisValue: cell.axis_value,
            variant: cell.variant,
            dir: cellDir,
            csvs,
        });
    }
    return cells;
}

// Walks a results directory and classifies what the harness left behind:
// sweep directories (sweep_summary.json), toy problem output
// (toy2d_meta.json), and plain run directories (summary.json). Recognized
// directories are not descended into further.
export function discover(resultsDir: string): Group[] {
    const groups: Group[] = [];

    function visit(dir: string): void {
        const { files, dirs } = listDir(dir);
        const names = new Set(files.map((f) => f.slice(dir.length + 1)));
        const relDir = relative(resultsDir, dir).split(sep).join("/") || ".";

        if (names.has("sweep_summary.json")) {
            const summary = JSON.parse(readFileSync(join(dir, "sweep_summary.json"), "utf8")) as {
                preset?: string;
            };
            groups.push({
                kind: "sweep",
                dir,
                relDir,
                preset: summary.preset ?? "sweep",
                cells: readSweepSummary(dir, join(dir, "sweep_summary.json")),
            });
            return;
        }
        if (names.has("toy2d_meta.json")) {
            groups.push({ kind: "toy2d", dir, relDir, csvs: csvsIn(files) });
            return;
        }
        if (names.has("summary.json")) {
            groups.push({ kind: "run", dir, relDir, csvs: csvsIn(files) });
            return;
        }
        for (const sub of dirs) {
            visit(sub);
        }
    }

    visit(resultsDir);
    return groups;
}
