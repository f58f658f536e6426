// Compare view: overlaid pressure traces of completed runs, one legend entry
// per run, so methods can be inspected side by side.

import { LineChart } from './charts'
import type { CompletedRun } from './types'

const RUN_COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#17becf']

export function renderCompareView(container: HTMLElement, runs: CompletedRun[]): LineChart | null {
  container.replaceChildren()
  if (runs.length === 0) {
    const empty = document.createElement('p')
    empty.className = 'compare-empty'
    empty.textContent = 'No completed runs to compare yet. Run a simulation and add it here.'
    container.appendChild(empty)
    return null
  }
  const traces = runs.map((run, i) => ({
    label: run.label,
    x: run.response.series.t,
    y: run.response.series.pressure,
    color: RUN_COLORS[i % RUN_COLORS.length],
  }))
  // One shared setpoint line from the first run.
  traces.push({
    label: 'setpoint',
    x: runs[0].response.series.t,
    y: runs[0].response.series.setpoint,
    color: '#777',
    dashed: true,
  } as (typeof traces)[number])
  return new LineChart(container, traces, {
    title: 'Pressure traces',
    xLabel: 'time, s',
    yLabel: 'pressure, bar',
  })
}
