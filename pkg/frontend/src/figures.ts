import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { SchemaError, readMetricsCsv, readToy2dCsv } from "./csv.js";
import { MetricsFile, MetricsRow } from "./schema.js";
import {
    MARGIN,
    PALETTE,
    SvgDocument,
    colorFor,
    drawAxes,
    drawLegend,
    extent,
    linearScale,
    padDomain,
    ticks,
} from "./svg.js";

export type FigureKind = "curves" | "layer_bars" | "entropy" | "toy2d";

export interface FigureSpec {
    kind: FigureKind;
    // CSV files to read. For curves/layer_bars/entropy these are harness
    // metric files; seeds of one experiment are grouped by run id prefix.
    inputs: string[];
    output: string;
    // Display names keyed by series key (run id prefix, or toy2d file name).
    labels?: Record<string, string>;
    title?: string;
}

const VARIANT_ORDER = [
    "none",
    "zerosum",
    "positivesum",
    "expdiff",
    "global_exp",
    "random_boost",
    "inverted",
];

interface Series {
    key: string;
    label: string;
    variant: string | null;
    files: MetricsFile[];
}

function variantOf(runPrefix: string): string | null {
    for (const token of runPrefix.split("-")) {
        if (VARIANT_ORDER.includes(token)) {
            return token;
        }
    }
    return null;
}

// Group per-seed metric files into one series per experiment, ordered
// vanilla first and then by modulation variant so colors and legends are
// stable across figures.
function collectSeries(spec: FigureSpec): Series[] {
    if (spec.inputs.length === 0) {
        throw new SchemaError(`${spec.output}: no input files`);
    }
    const byPrefix = new Map<string, MetricsFile[]>();
    for (const path of [...spec.inputs].sort()) {
        const file = readMetricsCsv(path);
        const group = byPrefix.get(file.runPrefix);
        if (group) {
            group.push(file);
        } else {
            byPrefix.set(file.runPrefix, [file]);
        }
    }
    const series = [...byPrefix.entries()].map(([key, files]) => ({
        key,
        label: spec.labels?.[key] ?? variantOf(key) ?? key,
        variant: variantOf(key),
        files,
    }));
    series.sort((a, b) => {
        const ai = a.variant ? VARIANT_ORDER.indexOf(a.variant) : VARIANT_ORDER.length;
        const bi = b.variant ? VARIANT_ORDER.indexOf(b.variant) : VARIANT_ORDER.length;
        return ai - bi || a.label.localeCompare(b.label);
    });
    return series;
}

function devRows(file: MetricsFile): MetricsRow[] {
    return file.rows.filter((r) => r.split === "dev");
}

interface BandPoint {
    x: number;
    mean: number;
    min: number;
    max: number;
}

// Mean and min/max across seeds at every step where at least one seed
// reported a value. With a single seed the band collapses onto the line.
function bandOverSeeds(files: MetricsFile[], value: (row: MetricsRow) => number | null): BandPoint[] {
    const byStep = new Map<number, number[]>();
    for (const file of files) {
        for (const row of devRows(file)) {
            const v = value(row);
            if (v === null) {
                continue;
            }
            const bucket = byStep.get(row.step);
            if (bucket) {
                bucket.push(v);
            } else {
                byStep.set(row.step, [v]);
            }
        }
    }
    return [...byStep.entries()]
        .sort((a, b) => a[0] - b[0])
        .map(([x, values]) => ({
            x,
            mean: values.reduce((s, v) => s + v, 0) / values.length,
            min: Math.min(...values),
            max: Math.max(...values),
        }));
}

function renderCurves(spec: FigureSpec): string {
    const series = collectSeries(spec);
    const bands = series.map((s) => bandOverSeeds(s.files, (row) => row.accuracy));
    const nonEmpty = bands.some((b) => b.length > 0);
    if (!nonEmpty) {
        throw new SchemaError(`${spec.output}: no dev rows in inputs`);
    }

    const xs = bands.flatMap((b) => b.map((p) => p.x));
    const ys = bands.flatMap((b) => b.flatMap((p) => [p.min, p.max]));
    const doc = new SvgDocument();
    const xScale = linearScale(padDomain(extent(xs)), [MARGIN.left, doc.width - MARGIN.right]);
    const yScale = linearScale(padDomain(extent(ys)), [doc.height - MARGIN.bottom, MARGIN.top]);

    drawAxes(doc, {
        title: spec.title ?? "Dev accuracy over training",
        xLabel: "step",
        yLabel: "dev accuracy",
        xTicks: ticks(xScale.domain),
        yTicks: ticks(yScale.domain),
        xScale,
        yScale,
    });

    series.forEach((s, i) => {
        const band = bands[i]!;
        const color = colorFor(s.variant ?? s.label, i);
        const upper: [number, number][] = band.map((p) => [xScale(p.x), yScale(p.max)]);
        const lower: [number, number][] = band.map((p) => [xScale(p.x), yScale(p.min)]);
        doc.polygon([...upper, ...lower.reverse()], color, 0.2);
    });
    series.forEach((s, i) => {
        const band = bands[i]!;
        const color = colorFor(s.variant ?? s.label, i);
        doc.polyline(band.map((p) => [xScale(p.x), yScale(p.mean)]), color);
    });

    drawLegend(doc, series.map((s, i) => ({ label: s.label, color: colorFor(s.variant ?? s.label, i) })));
    return doc.render();
}

function renderEntropy(spec: FigureSpec): string {
    const series = collectSeries(spec);
    const layers = Math.max(...series.map((s) => Math.max(...s.files.map((f) => f.entropyLayers))));
    if (layers === 0) {
        throw new SchemaError(`${spec.output}: missing required column(s): entropy_0`);
    }

    interface Line {
        label: string;
        color: string;
        points: BandPoint[];
    }
    const lines: Line[] = [];
    series.forEach((s) => {
        for (let layer = 0; layer < layers; layer += 1) {
            const points = bandOverSeeds(s.files, (row) => row.entropy[layer] ?? null);
            if (points.length === 0) {
                continue;
            }
            const label = series.length > 1 ? `${s.label} layer ${layer}` : `layer ${layer}`;
            lines.push({ label, color: PALETTE[lines.length % PALETTE.length]!, points });
        }
    });
    if (lines.length === 0) {
        throw new SchemaError(`${spec.output}: no dev rows in inputs`);
    }

    const xs = lines.flatMap((l) => l.points.map((p) => p.x));
    const ys = lines.flatMap((l) => l.points.map((p) => p.mean));
    const doc = new SvgDocument();
    const xScale = linearScale(padDomain(extent(xs)), [MARGIN.left, doc.width - MARGIN.right]);
    const yScale = linearScale(padDomain(extent(ys)), [doc.height - MARGIN.bottom, MARGIN.top]);

    drawAxes(doc, {
        title: spec.title ?? "Routing entropy over training",
        xLabel: "step",
        yLabel: "routing entropy",
        xTicks: ticks(xScale.domain),
        yTicks: ticks(yScale.domain),
        xScale,
        yScale,
    });

    for (const line of lines) {
        doc.polyline(line.points.map((p) => [xScale(p.x), yScale(p.mean)]), line.color);
    }
    drawLegend(doc, lines.map((l) => ({ label: l.label, color: l.color })));
    return doc.render();
}

function renderLayerBars(spec: FigureSpec): string {
    const series = collectSeries(spec);
    const layers = Math.max(
        ...series.map((s) => Math.max(...s.files.map((f) => f.specializationLayers))));
    if (layers === 0) {
        throw new SchemaError(`${spec.output}: missing required column(s): specialization_0`);
    }

    // Final specialization per layer: last dev row of each seed, then
    // mean and min/max across seeds.
    interface Bar {
        mean: number;
        min: number;
        max: number;
    }
    const barsPerSeries: Bar[][] = series.map((s) => {
        const finals: (number | null)[][] = s.files.map((f) => {
            const rows = devRows(f);
            if (rows.length === 0) {
                throw new SchemaError(`${f.path}: no dev rows`);
            }
            return rows[rows.length - 1]!.specialization;
        });
        return Array.from({ length: layers }, (_, layer) => {
            const values = finals
                .map((spec_) => spec_[layer] ?? null)
                .filter((v): v is number => v !== null);
            if (values.length === 0) {
                return { mean: 0, min: 0, max: 0 };
            }
            return {
                mean: values.reduce((a, v) => a + v, 0) / values.length,
                min: Math.min(...values),
                max: Math.max(...values),
            };
        });
    });

    const doc = new SvgDocument();
    const top = Math.max(...barsPerSeries.flatMap((bars) => bars.map((b) => b.max)));
    const yScale = linearScale([0, top * 1.1 || 1], [doc.height - MARGIN.bottom, MARGIN.top]);
    const plotLeft = MARGIN.left;
    const plotWidth = doc.width - MARGIN.left - MARGIN.right;
    const slot = plotWidth / layers;
    const barWidth = (slot * 0.7) / series.length;

    const xTickScale = linearScale([0, layers - 1 || 1], [
        plotLeft + slot / 2,
        plotLeft + slot / 2 + slot * (layers - 1),
    ]);
    drawAxes(doc, {
        title: spec.title ?? "Final specialization by layer",
        xLabel: "layer",
        yLabel: "specialization",
        xTicks: Array.from({ length: layers }, (_, i) => i),
        yTicks: ticks(yScale.domain),
        xScale: xTickScale,
        yScale,
    });

    const baseline = yScale(0);
    barsPerSeries.forEach((bars, si) => {
        const s = series[si]!;
        const color = colorFor(s.variant ?? s.label, si);
        bars.forEach((bar, layer) => {
            const groupLeft = plotLeft + slot * layer + slot * 0.15;
            const x = groupLeft + barWidth * si;
            doc.rect(x, yScale(bar.mean), barWidth, baseline - yScale(bar.mean), color);
            if (bar.max > bar.min) {
                const cx = x + barWidth / 2;
                doc.line(cx, yScale(bar.min), cx, yScale(bar.max), "#333333");
            }
        });
    });

    drawLegend(doc, series.map((s, i) => ({ label: s.label, color: colorFor(s.variant ?? s.label, i) })));
    return doc.render();
}

function renderToy2d(spec: FigureSpec): string {
    if (spec.inputs.length === 0) {
        throw new SchemaError(`${spec.output}: no input files`);
    }
    const files = [...spec.inputs].sort().map(readToy2dCsv);

    const xs = files.flatMap((f) => f.rows.map((r) => r.w0));
    const ys = files.flatMap((f) => f.rows.map((r) => r.w1));
    const doc = new SvgDocument();
    const xScale = linearScale(padDomain(extent(xs), 0.1), [MARGIN.left, doc.width - MARGIN.right]);
    const yScale = linearScale(padDomain(extent(ys), 0.1), [doc.height - MARGIN.bottom, MARGIN.top]);

    drawAxes(doc, {
        title: spec.title ?? "Toy 2D descent trajectories",
        xLabel: "w0",
        yLabel: "w1",
        xTicks: ticks(xScale.domain),
        yTicks: ticks(yScale.domain),
        xScale,
        yScale,
    });

    files.forEach((file, i) => {
        const color = PALETTE[i % PALETTE.length]!;
        const points: [number, number][] = file.rows.map((r) => [xScale(r.w0), yScale(r.w1)]);
        doc.polyline(points, color);
        const first = points[0]!;
        const last = points[points.length - 1]!;
        doc.circle(first[0], first[1], 4, "#ffffff");
        doc.circle(first[0], first[1], 2.5, color);
        doc.circle(last[0], last[1], 3.5, color);
    });

    drawLegend(doc, files.map((f, i) => ({
        label: spec.labels?.[f.name] ?? f.name,
        color: PALETTE[i % PALETTE.length]!,
    })));
    return doc.render();
}

export function renderToString(spec: FigureSpec): string {
    switch (spec.kind) {
        case "curves":
            return renderCurves(spec);
        case "entropy":
            return renderEntropy(spec);
        case "layer_bars":
            return renderLayerBars(spec);
        case "toy2d":
            return renderToy2d(spec);
    }
}

// Renders the figure and writes it to spec.output. Reads the input CSVs,
// never writes to them; identical inputs produce identical bytes.
export function render(spec: FigureSpec): string {
    const svg = renderToString(spec);
    mkdirSync(dirname(spec.output), { recursive: true });
    writeFileSync(spec.output, svg, "utf8");
    return spec.output;
}
