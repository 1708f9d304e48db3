import { Table, column } from "./csv.js"
import { Panel, SeriesStyle, renderChart } from "./svg.js"

interface SeriesSpec {
  column: string
  label?: string
  style: SeriesStyle
}

interface PanelSpec {
  title?: string
  x: string
  xLabel: string
  yLabel: string
  series: SeriesSpec[]
}

export interface FigureSpec {
  id: number
  panels: PanelSpec[]
}

const RED = "#c0392b"
const BLUE = "#2471a3"
const BLACK = "#111111"
const GREEN = "#1e8449"

// one dash pattern per site so four curves share a color without ambiguity
const SITE_DASH = ["", "7 3", "2 2", "8 2 2 2"]

function family(prefix: string, color: string, count: number): SeriesSpec[] {
  const out: SeriesSpec[] = []
  for (let n = 1; n <= count; n++) {
    out.push({
      column: `${prefix}:${n}`,
      style: { color, width: 1.4, dash: SITE_DASH[n - 1] || "1 3" },
    })
  }
  return out
}

const FIGURES: FigureSpec[] = [
  {
    id: 1,
    panels: [
      {
        title: "transverse response vs probe strength",
        x: "nu",
        xLabel: "nu",
        yLabel: "expectation value",
        series: [
          ...family("sx", RED, 4),
          ...family("sy", BLUE, 4),
          ...family("jy", BLACK, 3),
        ],
      },
    ],
  },
  {
    id: 2,
    panels: [
      {
        title: "boundary magnetization vs twist",
        x: "alpha_bath",
        xLabel: "alpha_bath",
        yLabel: "boundary expectation",
        series: [
          { column: "sx:1", style: { color: RED, width: 1.2 } },
          { column: "sy:1", style: { color: BLUE, width: 1.2 } },
          { column: "sx:5", style: { color: RED, width: 1.2, dash: "7 3" } },
          { column: "sy:5", style: { color: BLUE, width: 1.2, dash: "7 3" } },
          { column: "target_left_x", style: { color: RED, width: 3 } },
          { column: "target_left_y", style: { color: BLUE, width: 3 } },
          { column: "target_right_x", style: { color: RED, width: 3, dash: "7 3" } },
          { column: "target_right_y", style: { color: BLUE, width: 3, dash: "7 3" } },
        ],
      },
    ],
  },
  {
    id: 3,
    panels: [
      {
        title: "steady currents vs twist",
        x: "alpha_bath",
        xLabel: "alpha_bath",
        yLabel: "current",
        series: [
          { column: "jz:2-3", label: "spin", style: { color: BLACK, width: 2 } },
          { column: "je:3", label: "energy", style: { color: RED, width: 2, dash: "7 3" } },
        ],
      },
      {
        title: "boundary gradients vs twist",
        x: "alpha_bath",
        xLabel: "alpha_bath",
        yLabel: "gradient",
        series: [
          { column: "grad:x", style: { color: RED, width: 1.6 } },
          { column: "grad:y", style: { color: BLUE, width: 1.6 } },
          { column: "grad:z", style: { color: GREEN, width: 1.6 } },
        ],
      },
    ],
  },
]

export function figureSpec(id: number): FigureSpec {
  const spec = FIGURES.find(f => f.id === id)
  if (!spec) throw new Error(`unknown figure id ${id} (have 1, 2, 3)`)
  return spec
}

/** Build the SVG for one figure from a sweep table. */
export function render(id: number, table: Table): string {
  const spec = figureSpec(id)
  const panels: Panel[] = spec.panels.map(p => {
    const x = column(table, p.x)
    if (x.length < 2) {
      throw new Error(`figure ${id}: need at least 2 points, got ${x.length}`)
    }
    return {
      title: p.title,
      xLabel: p.xLabel,
      yLabel: p.yLabel,
      series: p.series.map(s => ({
        label: s.label ?? s.column,
        x,
        y: column(table, s.column),
        style: s.style,
      })),
    }
  })
  return renderChart(panels)
}
