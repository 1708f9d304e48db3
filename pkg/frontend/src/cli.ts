import { readFileSync, writeFileSync } from "node:fs"
import { parseArgs } from "node:util"
import { parseCsv } from "./csv.js"
import { render } from "./figures.js"

const USAGE = "usage: render --csv data.csv --fig 1|2|3 --out fig.svg"

function main(argv: string[]): number {
  const { values, positionals } = parseArgs({
    args: argv,
    options: {
      csv: { type: "string" },
      fig: { type: "string" },
      out: { type: "string" },
    },
    allowPositionals: true,
  })
  if (positionals[0] !== "render" || !values.csv || !values.fig || !values.out) {
    console.error(USAGE)
    return 2
  }
  const figId = Number(values.fig)
  const table = parseCsv(readFileSync(values.csv, "utf8"))
  writeFileSync(values.out, render(figId, table))
  console.log(`wrote ${values.out}`)
  return 0
}

try {
  process.exitCode = main(process.argv.slice(2))
} catch (err) {
  console.error(`error: ${err instanceof Error ? err.message : err}`)
  process.exitCode = 1
}
