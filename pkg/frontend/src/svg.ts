/** Minimal deterministic SVG line charts: no dates, no ids, no randomness,
 * so the same data always yields the same bytes. */

export interface SeriesStyle {
  color: string
  width: number
  dash?: string
}

export interface Series {
  label: string
  x: number[]
  y: number[]
  style: SeriesStyle
}

export interface Panel {
  title?: string
  xLabel: string
  yLabel: string
  series: Series[]
}

const MARGIN = { top: 28, right: 150, bottom: 42, left: 64 }

function fmt(v: number): string {
  return v.toFixed(2)
}

function tickLabel(v: number): string {
  if (v === 0) return "0"
  const s = v.toPrecision(3)
  return s.includes(".") ? s.replace(/\.?0+$/, "").replace(/\.?0+e/, "e") : s
}

function niceStep(rough: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(rough)))
  for (const m of [1, 2, 5, 10]) {
    if (rough <= m * mag) return m * mag
  }
  return 10 * mag
}

function ticks(lo: number, hi: number): number[] {
  const step = niceStep((hi - lo) / 4)
  const out: number[] = []
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    // snap near-zero values so -1e-17 does not print as "-0"
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v)
  }
  return out
}

function extent(values: number[]): [number, number] {
  let lo = Infinity
  let hi = -Infinity
  for (const v of values) {
    if (v < lo) lo = v
    if (v > hi) hi = v
  }
  if (lo === hi) {
    lo -= 1
    hi += 1
  }
  return [lo, hi]
}

function renderPanel(panel: Panel, width: number, height: number, offsetY: number): string {
  const x0 = MARGIN.left
  const x1 = width - MARGIN.right
  const y0 = offsetY + MARGIN.top
  const y1 = offsetY + height - MARGIN.bottom

  const [xLo, xHi] = extent(panel.series.flatMap(s => s.x))
  const yAll = panel.series.flatMap(s => s.y)
  let [yLo, yHi] = extent(yAll)
  const pad = (yHi - yLo) * 0.05
  yLo -= pad
  yHi += pad
  const sx = (v: number) => x0 + ((v - xLo) / (xHi - xLo)) * (x1 - x0)
  const sy = (v: number) => y1 - ((v - yLo) / (yHi - yLo)) * (y1 - y0)

  const parts: string[] = [`<g class="panel">`]
  if (panel.title) {
    parts.push(
      `<text x="${fmt((x0 + x1) / 2)}" y="${fmt(y0 - 10)}" text-anchor="middle" font-weight="bold">${panel.title}</text>`
    )
  }
  parts.push(`<rect x="${fmt(x0)}" y="${fmt(y0)}" width="${fmt(x1 - x0)}" height="${fmt(y1 - y0)}" fill="none" stroke="#000"/>`)

  for (const v of ticks(xLo, xHi)) {
    const px = sx(v)
    parts.push(`<line x1="${fmt(px)}" y1="${fmt(y1)}" x2="${fmt(px)}" y2="${fmt(y1 + 5)}" stroke="#000"/>`)
    parts.push(`<text x="${fmt(px)}" y="${fmt(y1 + 18)}" text-anchor="middle" font-size="11">${tickLabel(v)}</text>`)
  }
  for (const v of ticks(yLo, yHi)) {
    const py = sy(v)
    parts.push(`<line x1="${fmt(x0 - 5)}" y1="${fmt(py)}" x2="${fmt(x0)}" y2="${fmt(py)}" stroke="#000"/>`)
    parts.push(`<text x="${fmt(x0 - 8)}" y="${fmt(py + 4)}" text-anchor="end" font-size="11">${tickLabel(v)}</text>`)
  }
  parts.push(
    `<text x="${fmt((x0 + x1) / 2)}" y="${fmt(y1 + 34)}" text-anchor="middle" font-size="12">${panel.xLabel}</text>`
  )
  parts.push(
    `<text x="${fmt(x0 - 48)}" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" font-size="12" transform="rotate(-90 ${fmt(x0 - 48)} ${fmt((y0 + y1) / 2)})">${panel.yLabel}</text>`
  )

  for (const s of panel.series) {
    const pts = s.x.map((v, i) => `${fmt(sx(v))},${fmt(sy(s.y[i]))}`).join(" ")
    const dash = s.style.dash ? ` stroke-dasharray="${s.style.dash}"` : ""
    parts.push(
      `<polyline class="series" fill="none" stroke="${s.style.color}" stroke-width="${s.style.width}"${dash} points="${pts}"/>`
    )
  }

  panel.series.forEach((s, i) => {
    const ly = y0 + 14 + i * 16
    const dash = s.style.dash ? ` stroke-dasharray="${s.style.dash}"` : ""
    parts.push(`<line x1="${fmt(x1 + 10)}" y1="${fmt(ly)}" x2="${fmt(x1 + 34)}" y2="${fmt(ly)}" stroke="${s.style.color}" stroke-width="${s.style.width}"${dash}/>`)
    parts.push(`<text x="${fmt(x1 + 40)}" y="${fmt(ly + 4)}" font-size="11">${s.label}</text>`)
  })
  parts.push("</g>")
  return parts.join("\n")
}

export function renderChart(panels: Panel[], width = 640, panelHeight = 340): string {
  const height = panelHeight * panels.length
  const body = panels
    .map((panel, i) => renderPanel(panel, width, panelHeight, i * panelHeight))
    .join("\n")
  return [
    `<?xml version="1.0" encoding="UTF-8"?>`,
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#fff"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n")
}
