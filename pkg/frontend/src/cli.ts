#!/usr/bin/env node
// Exit codes: 0 figure written, 1 anything the user can fix (bad flags,
// bad spec, unreadable or empty inputs).

import { pathToFileURL } from "node:url";
import { RenderError } from "./errors.js";
import { render } from "./figures.js";
import { loadSpec } from "./spec.js";

const USAGE = "usage: capmimo-render render --spec <figure.toml>";

export function main(argv: string[]): number {
  if (argv.length !== 3 || argv[0] !== "render" || argv[1] !== "--spec") {
    console.error(USAGE);
    return 1;
  }
  try {
    const spec = loadSpec(argv[2]);
    render(spec);
    console.log(`wrote ${spec.out}`);
    return 0;
  } catch (err) {
    if (err instanceof RenderError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
