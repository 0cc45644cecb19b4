#!/usr/bin/env node
import { existsSync, statSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { Logger, renderAll } from "./renderAll.js";

const USAGE = "usage: plots render-all --results DIR --out DIR";

export function main(argv: string[], log: Logger = console.error): number {
    let parsed;
    try {
        parsed = parseArgs({
            args: argv,
            allowPositionals: true,
            options: {
                results: { type: "string" },
                out: { type: "string" },
            },
        });
    } catch (error) {
        log((error as Error).message);
        log(USAGE);
        return 2;
    }

    const [command] = parsed.positionals;
    if (command !== "render-all" || parsed.positionals.length !== 1) {
        log(USAGE);
        return 2;
    }
    const { results, out } = parsed.values;
    if (!results || !out) {
        log(USAGE);
        return 2;
    }
    if (!existsSync(results) || !statSync(results).isDirectory()) {
        log(`error: not a directory: ${results}`);
        return 1;
    }

    try {
        const manifest = renderAll(results, out, log);
        console.log(`wrote ${manifest.figures.length} figure(s), manifest -> ${out}/manifest.json`);
        return 0;
    } catch (error) {
        log(`error: ${(error as Error).message}`);
        return 1;
    }
}

const invokedDirectly = process.argv[1] !== undefined &&
    import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
    process.exit(main(process.argv.slice(2)));
}
