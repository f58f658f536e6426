// Membership-function plots: one chart per linguistic variable, all term
// curves overlaid, rendered from the sampled arrays the service returns.

import { LineChart } from './charts'
import type { MembershipVariable } from './types'

const TERM_COLORS = ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd', '#8c564b']

export function renderMembership(container: HTMLElement,
                                 variables: MembershipVariable[]): LineChart[] {
  const charts: LineChart[] = []
  for (const variable of variables) {
    const traces = variable.terms.map((term, i) => ({
      label: term.label,
      x: variable.x,
      y: term.mu,
      color: TERM_COLORS[i % TERM_COLORS.length],
    }))
    const holder = document.createElement('div')
    holder.className = 'membership-plot'
    holder.dataset.variable = variable.name
    charts.push(new LineChart(holder, traces, {
      title: variable.name,
      xLabel: variable.name.includes('error') ? 'error, bar' : 'position, %',
      yLabel: 'membership degree',
      width: 420,
      height: 220,
    }))
    container.appendChild(holder)
  }
  return charts
}
