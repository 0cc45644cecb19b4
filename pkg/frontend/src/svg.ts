// Small deterministic SVG builder. All coordinates are rounded to a fixed
// precision so identical inputs always serialize to identical bytes.

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 40, right: 20, bottom: 48, left: 60 };

export const PALETTE = [
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
];

// Excitation variants keep a fixed color no matter which subset appears,
// so the same variant looks the same across figures.
const VARIANT_COLORS: Record<string, string> = {
    none: "#7f7f7f",
    zerosum: "#1f77b4",
    positivesum: "#2ca02c",
    expdiff: "#9467bd",
    global_exp: "#ff7f0e",
    random_boost: "#8c564b",
    inverted: "#d62728",
};

export function colorFor(label: string, fallbackIndex: number): string {
    return VARIANT_COLORS[label] ?? PALETTE[fallbackIndex % PALETTE.length]!;
}

export function fmt(x: number): string {
    const rounded = Math.round(x * 100) / 100;
    // Normalize -0 so byte output is stable across code paths.
    return String(rounded === 0 ? 0 : rounded);
}

export function fmtTick(x: number): string {
    if (x === 0) {
        return "0";
    }
    const abs = Math.abs(x);
    if (abs >= 0.001 && abs < 10000) {
        return String(Math.round(x * 10000) / 10000);
    }
    return x.toExponential(2);
}

export interface Scale {
    (value: number): number;
    domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
    const [d0, d1] = domain;
    const [r0, r1] = range;
    const span = d1 - d0;
    const scale = ((value: number) =>
        span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
    scale.domain = domain;
    return scale;
}

export function extent(values: number[]): [number, number] {
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of values) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (lo === Infinity) {
        return [0, 1];
    }
    if (lo === hi) {
        return [lo - 0.5, hi + 0.5];
    }
    return [lo, hi];
}

export function padDomain([lo, hi]: [number, number], fraction = 0.05): [number, number] {
    const pad = (hi - lo) * fraction;
    return [lo - pad, hi + pad];
}

// Round tick steps to 1/2/5 times a power of ten.
export function ticks([lo, hi]: [number, number], count = 5): number[] {
    const span = hi - lo;
    if (span <= 0) {
        return [lo];
    }
    const rawStep = span / count;
    const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
    const candidates = [1, 2, 5, 10].map((m) => m * power);
    const step = candidates.find((c) => c >= rawStep) ?? candidates[3]!;
    const first = Math.ceil(lo / step) * step;
    const result: number[] = [];
    for (let v = first; v <= hi + step * 1e-9; v += step) {
        // Snap to the grid to avoid float drift in labels.
        result.push(Math.round(v / step) * step);
    }
    return result;
}

function escapeXml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export class SvgDocument {
    private parts: string[] = [];

    constructor(public readonly width = WIDTH, public readonly height = HEIGHT) {}

    line(x1: number, y1: number, x2: number, y2: number, stroke: string, strokeWidth = 1): void {
        this.parts.push(
            `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
            `stroke="${stroke}" stroke-width="${strokeWidth}"/>`);
    }

    polyline(points: [number, number][], stroke: string, strokeWidth = 1.5): void {
        const attr = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
        this.parts.push(
            `<polyline points="${attr}" fill="none" stroke="${stroke}" stroke-width="${strokeWidth}"/>`);
    }

    polygon(points: [number, number][], fill: string, opacity: number): void {
        const attr = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
        this.parts.push(`<polygon points="${attr}" fill="${fill}" fill-opacity="${opacity}"/>`);
    }

    rect(x: number, y: number, w: number, h: number, fill: string): void {
        this.parts.push(
            `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`);
    }

    circle(cx: number, cy: number, r: number, fill: string): void {
        this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"/>`);
    }

    text(x: number, y: number, content: string, options: {
        anchor?: "start" | "middle" | "end";
        size?: number;
        fill?: string;
        bold?: boolean;
        rotate?: number;
    } = {}): void {
        const anchor = options.anchor ?? "start";
        const size = options.size ?? 11;
        const fill = options.fill ?? "#333333";
        const weight = options.bold ? ` font-weight="bold"` : "";
        const transform = options.rotate
            ? ` transform="rotate(${options.rotate} ${fmt(x)} ${fmt(y)})"`
            : "";
        this.parts.push(
            `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-size="${size}" ` +
            `font-family="sans-serif" fill="${fill}"${weight}${transform}>${escapeXml(content)}</text>`);
    }

    render(): string {
        return [
            `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
            `viewBox="0 0 ${this.width} ${this.height}">`,
            `<rect x="0" y="0" width="${this.width}" height="${this.height}" fill="#ffffff"/>`,
            ...this.parts,
            `</svg>`,
            ``,
        ].join("\n");
    }
}

export interface AxesOptions {
    title: string;
    xLabel: string;
    yLabel: string;
    xTicks: number[];
    yTicks: number[];
    xScale: Scale;
    yScale: Scale;
}

export function drawAxes(doc: SvgDocument, options: AxesOptions): void {
    const left = MARGIN.left;
    const right = doc.width - MARGIN.right;
    const top = MARGIN.top;
    const bottom = doc.height - MARGIN.bottom;

    doc.text(doc.width / 2, top - 16, options.title, { anchor: "middle", size: 14, bold: true });

    doc.line(left, bottom, right, bottom, "#333333");
    doc.line(left, top, left, bottom, "#333333");

    for (const t of options.xTicks) {
        const x = options.xScale(t);
        doc.line(x, bottom, x, bottom + 4, "#333333");
        doc.text(x, bottom + 16, fmtTick(t), { anchor: "middle" });
    }
    for (const t of options.yTicks) {
        const y = options.yScale(t);
        doc.line(left - 4, y, left, y, "#333333");
        doc.text(left - 7, y + 3.5, fmtTick(t), { anchor: "end" });
        doc.line(left, y, right, y, "#eeeeee");
    }

    doc.text((left + right) / 2, doc.height - 10, options.xLabel, { anchor: "middle", size: 12 });
    doc.text(16, (top + bottom) / 2, options.yLabel, { anchor: "middle", size: 12, rotate: -90 });
}

export function drawLegend(doc: SvgDocument, entries: { label: string; color: string }[]): void {
    const x = MARGIN.left + 10;
    let y = MARGIN.top + 12;
    for (const entry of entries) {
        doc.rect(x, y - 8, 14, 8, entry.color);
        doc.text(x + 19, y, entry.label);
        y += 16;
    }
}
