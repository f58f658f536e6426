// Client-rendered SVG line charts. The only arithmetic applied to series
// data is the affine axis scaling; every plotted number comes straight from
// the API arrays, and hovering reads the nearest sample back out.

const SVG_NS = 'http://www.w3.org/2000/svg'

export interface Trace {
  label: string
  x: number[]
  y: number[]
  color: string
  dashed?: boolean
}

export interface ChartOptions {
  title: string
  xLabel: string
  yLabel: string
  width?: number
  height?: number
}

export interface LinearScale {
  (v: number): number
  domain: [number, number]
  range: [number, number]
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain
  const [r0, r1] = range
  const span = d1 - d0 || 1
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as LinearScale
  scale.domain = domain
  scale.range = range
  return scale
}

export function dataExtent(traces: Trace[], axis: 'x' | 'y'): [number, number] {
  let lo = Infinity
  let hi = -Infinity
  for (const trace of traces) {
    for (const v of trace[axis]) {
      if (v < lo) lo = v
      if (v > hi) hi = v
    }
  }
  if (lo === Infinity) return [0, 1]
  if (lo === hi) return [lo - 0.5, hi + 0.5]
  return [lo, hi]
}

export function buildPath(xs: number[], ys: number[], sx: LinearScale, sy: LinearScale): string {
  const parts: string[] = []
  for (let i = 0; i < xs.length; i++) {
    const cmd = i === 0 ? 'M' : 'L'
    parts.push(`${cmd}${sx(xs[i]).toFixed(2)},${sy(ys[i]).toFixed(2)}`)
  }
  return parts.join(' ')
}

export function ticks(domain: [number, number], count = 5): number[] {
  const [lo, hi] = domain
  const step = (hi - lo) / (count - 1)
  return Array.from({ length: count }, (_, i) => lo + i * step)
}

export function nearestIndex(xs: number[], x: number): number {
  let best = 0
  let bestDist = Infinity
  for (let i = 0; i < xs.length; i++) {
    const d = Math.abs(xs[i] - x)
    if (d < bestDist) {
      bestDist = d
      best = i
    }
  }
  return best
}

const MARGIN = { top: 28, right: 16, bottom: 36, left: 52 }

export class LineChart {
  readonly root: HTMLElement
  readonly svg: SVGSVGElement
  private readonly readout: HTMLElement
  private readonly traces: Trace[]
  private readonly sx: LinearScale
  private readonly sy: LinearScale

  constructor(container: HTMLElement, traces: Trace[], options: ChartOptions) {
    const width = options.width ?? 640
    const height = options.height ?? 300
    this.traces = traces
    this.sx = linearScale(dataExtent(traces, 'x'), [MARGIN.left, width - MARGIN.right])
    this.sy = linearScale(dataExtent(traces, 'y'), [height - MARGIN.bottom, MARGIN.top])

    this.root = document.createElement('figure')
    this.root.className = 'chart'
    this.svg = document.createElementNS(SVG_NS, 'svg') as SVGSVGElement
    this.svg.setAttribute('viewBox', `0 0 ${width} ${height}`)
    this.svg.setAttribute('width', String(width))
    this.svg.setAttribute('height', String(height))
    this.svg.setAttribute('role', 'img')

    const title = document.createElementNS(SVG_NS, 'text')
    title.setAttribute('x', String(width / 2))
    title.setAttribute('y', '16')
    title.setAttribute('text-anchor', 'middle')
    title.setAttribute('class', 'chart-title')
    title.textContent = options.title
    this.svg.appendChild(title)

    this.drawAxes(width, height, options)
    for (const trace of traces) this.drawTrace(trace)
    this.drawLegend(traces)

    this.readout = document.createElement('figcaption')
    this.readout.className = 'chart-readout'
    this.readout.textContent = ' '
    this.svg.addEventListener('mousemove', (ev) => this.onHover(ev as MouseEvent))
    this.svg.addEventListener('mouseleave', () => {
      this.readout.textContent = ' '
    })

    this.root.appendChild(this.svg)
    this.root.appendChild(this.readout)
    container.appendChild(this.root)
  }

  private drawAxes(width: number, height: number, options: ChartOptions): void {
    const axis = document.createElementNS(SVG_NS, 'g')
    axis.setAttribute('class', 'chart-axes')
    const [x0, x1] = this.sx.range
    const [y0, y1] = this.sy.range
    const frame = document.createElementNS(SVG_NS, 'path')
    frame.setAttribute('d', `M${x0},${y1} L${x0},${y0} L${x1},${y0}`)
    frame.setAttribute('fill', 'none')
    frame.setAttribute('stroke', '#444')
    axis.appendChild(frame)

    for (const t of ticks(this.sx.domain)) {
      const label = document.createElementNS(SVG_NS, 'text')
      label.setAttribute('x', String(this.sx(t)))
      label.setAttribute('y', String(y0 + 16))
      label.setAttribute('text-anchor', 'middle')
      label.setAttribute('class', 'tick')
      label.textContent = formatTick(t)
      axis.appendChild(label)
    }
    for (const t of ticks(this.sy.domain)) {
      const label = document.createElementNS(SVG_NS, 'text')
      label.setAttribute('x', String(x0 - 6))
      label.setAttribute('y', String(this.sy(t) + 4))
      label.setAttribute('text-anchor', 'end')
      label.setAttribute('class', 'tick')
      label.textContent = formatTick(t)
      axis.appendChild(label)
    }

    const xl = document.createElementNS(SVG_NS, 'text')
    xl.setAttribute('x', String((x0 + x1) / 2))
    xl.setAttribute('y', String(height - 4))
    xl.setAttribute('text-anchor', 'middle')
    xl.setAttribute('class', 'axis-label')
    xl.textContent = options.xLabel
    axis.appendChild(xl)

    const yl = document.createElementNS(SVG_NS, 'text')
    yl.setAttribute('transform', `translate(12 ${(y0 + y1) / 2}) rotate(-90)`)
    yl.setAttribute('text-anchor', 'middle')
    yl.setAttribute('class', 'axis-label')
    yl.textContent = options.yLabel
    axis.appendChild(yl)
    this.svg.appendChild(axis)
  }

  private drawTrace(trace: Trace): void {
    const path = document.createElementNS(SVG_NS, 'path')
    path.setAttribute('d', buildPath(trace.x, trace.y, this.sx, this.sy))
    path.setAttribute('fill', 'none')
    path.setAttribute('stroke', trace.color)
    path.setAttribute('stroke-width', '1.6')
    path.setAttribute('class', 'trace')
    path.setAttribute('data-label', trace.label)
    if (trace.dashed) path.setAttribute('stroke-dasharray', '6 4')
    this.svg.appendChild(path)
  }

  private drawLegend(traces: Trace[]): void {
    const legend = document.createElementNS(SVG_NS, 'g')
    legend.setAttribute('class', 'chart-legend')
    traces.forEach((trace, i) => {
      const y = MARGIN.top + 14 * i
      const swatch = document.createElementNS(SVG_NS, 'rect')
      swatch.setAttribute('x', String(this.sx.range[1] - 130))
      swatch.setAttribute('y', String(y - 8))
      swatch.setAttribute('width', '10')
      swatch.setAttribute('height', '3')
      swatch.setAttribute('fill', trace.color)
      legend.appendChild(swatch)
      const label = document.createElementNS(SVG_NS, 'text')
      label.setAttribute('x', String(this.sx.range[1] - 116))
      label.setAttribute('y', String(y - 4))
      label.setAttribute('class', 'legend-entry')
      label.textContent = trace.label
      legend.appendChild(label)
    })
    this.svg.appendChild(legend)
  }

  private onHover(ev: MouseEvent): void {
    const rect = this.svg.getBoundingClientRect()
    if (rect.width === 0) return
    const frac = (ev.clientX - rect.left) / rect.width
    const [d0, d1] = this.sx.domain
    const x = d0 + frac * (d1 - d0)
    const first = this.traces[0]
    if (!first || first.x.length === 0) return
    const idx = nearestIndex(first.x, x)
    const parts = this.traces.map((t) => `${t.label}=${formatTick(t.y[idx])}`)
    this.readout.textContent = `t=${formatTick(first.x[idx])}: ${parts.join('  ')}`
  }
}

function formatTick(v: number): string {
  if (!Number.isFinite(v)) return String(v)
  const rounded = Math.round(v * 1000) / 1000
  return String(rounded)
}
