#!/usr/bin/env node
/**
 * Usage:
 *   mi-sim-render render --experiment fig5_reliability \
 *       --csv results.csv --out fig5.svg [--title ...]
 *
 * Exit codes: 0 success, 1 runtime failure, 2 usage.
 */

import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { EXPERIMENTS, isExperimentId } from "./figures.js";
import { renderToFile } from "./render.js";

function usage(): void {
  console.error(
    "usage: mi-sim-render render --experiment <id> --csv <file> --out <file.svg>\n" +
      `  experiments: ${EXPERIMENTS.join(", ")}`,
  );
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        experiment: { type: "string" },
        csv: { type: "string" },
        out: { type: "string" },
        title: { type: "string" },
      },
    });
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    usage();
    return 2;
  }
  const { positionals, values } = parsed;
  if (
    positionals.length !== 1 ||
    positionals[0] !== "render" ||
    !values.experiment ||
    !values.csv ||
    !values.out
  ) {
    usage();
    return 2;
  }
  if (!isExperimentId(values.experiment)) {
    console.error(`unknown experiment '${values.experiment}'`);
    usage();
    return 2;
  }
  try {
    const result = renderToFile({
      experiment: values.experiment,
      csvPath: values.csv,
      outPath: values.out,
      title: values.title,
    });
    console.log(
      `wrote ${values.out} (${result.series.length} series, ` +
        `digest ${result.digest.slice(0, 12)})`,
    );
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (
  process.argv[1] &&
  import.meta.url === pathToFileURL(process.argv[1]).href
) {
  process.exit(main(process.argv.slice(2)));
}
