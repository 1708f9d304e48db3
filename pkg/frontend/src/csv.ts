/** Reader for the sweep CSVs: one header row, comma-separated numeric cells. */

export interface Table {
  columns: string[]
  rows: number[][]
}

export function parseCsv(text: string): Table {
  const lines = text.split("\n").filter(line => line.trim() !== "")
  if (lines.length === 0) {
    throw new Error("empty CSV")
  }
  const columns = lines[0].split(",")
  const rows: number[][] = []
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",")
    if (cells.length !== columns.length) {
      // line count includes the header so it matches what an editor shows
      throw new Error(`row ${i + 1} has ${cells.length} cells, header has ${columns.length}`)
    }
    const row = cells.map(cell => {
      const v = Number(cell)
      if (!Number.isFinite(v)) {
        throw new Error(`row ${i + 1}: not a number: ${JSON.stringify(cell)}`)
      }
      return v
    })
    rows.push(row)
  }
  return { columns, rows }
}

/** Column values by name; the error names the column so configs are debuggable. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name)
  if (idx < 0) {
    throw new Error(`missing column ${JSON.stringify(name)} (have: ${table.columns.join(", ")})`)
  }
  return table.rows.map(row => row[idx])
}
