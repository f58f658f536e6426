// Metrics table: every report field with its unit; absent times show as an
// em dash, matching the published tables.

import type { MetricsReport } from './types'

interface MetricRow {
  key: keyof MetricsReport
  name: string
  unit: string
}

export const METRIC_ROWS: MetricRow[] = [
  { key: 'mse', name: 'MSE', unit: 'bar²' },
  { key: 'rmse', name: 'RMSE', unit: 'bar' },
  { key: 'mae', name: 'MAE', unit: 'bar' },
  { key: 'iae', name: 'IAE', unit: 'bar·s' },
  { key: 'ise', name: 'ISE', unit: 'bar²·s' },
  { key: 'itae', name: 'ITAE', unit: 'bar·s²' },
  { key: 'sse', name: 'Steady-state error', unit: 'bar' },
  { key: 'rise_time', name: 'Rise time', unit: 's' },
  { key: 'fall_time', name: 'Fall time', unit: 's' },
  { key: 'settling_time', name: 'Settling time', unit: 's' },
  { key: 'over_under_pct', name: 'Over/undershoot', unit: '%' },
  { key: 'direction', name: 'Direction', unit: '' },
]

export function formatMetric(value: number | string | null): string {
  if (value === null || value === undefined) return '—'
  if (typeof value === 'string') return value
  return value.toFixed(4)
}

export function renderMetricsTable(container: HTMLElement, metrics: MetricsReport): HTMLTableElement {
  const table = document.createElement('table')
  table.className = 'metrics-table'
  const head = table.createTHead().insertRow()
  for (const text of ['Metric', 'Value', 'Unit']) {
    const th = document.createElement('th')
    th.textContent = text
    head.appendChild(th)
  }
  const body = table.createTBody()
  for (const row of METRIC_ROWS) {
    const tr = body.insertRow()
    tr.insertCell().textContent = row.name
    const cell = tr.insertCell()
    cell.textContent = formatMetric(metrics[row.key] as number | string | null)
    cell.dataset.metric = row.key
    tr.insertCell().textContent = row.unit
  }
  container.appendChild(table)
  return table
}
