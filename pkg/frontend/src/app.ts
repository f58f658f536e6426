// Application wiring: parameter form, run trigger, result charts, metrics
// table, optional membership plots, and the run-comparison view.

import { ApiClient, ApiError } from './api'
import { LineChart } from './charts'
import { renderCompareView } from './compare'
import { renderMembership } from './membership'
import { renderMetricsTable } from './metricsTable'
import type { CompletedRun, SimulateResponse } from './types'
import {
  API_FIELD_TO_FORM,
  defaultFormState,
  FormState,
  METHODS,
  toRequest,
  validateForm,
} from './validation'

interface FieldSpec {
  key: keyof FormState
  label: string
  kind: 'number' | 'select' | 'checkbox'
  step?: string
  options?: readonly (string | number)[]
}

const FIELDS: FieldSpec[] = [
  { key: 'setpoint', label: 'Setpoint (bar)', kind: 'number', step: '0.1' },
  { key: 'initialPressure', label: 'Initial pressure (bar)', kind: 'number', step: '0.01' },
  { key: 'totalTime', label: 'Total time (s)', kind: 'number', step: '1' },
  { key: 'timeStep', label: 'Time step (s)', kind: 'number', step: '0.05' },
  { key: 'method', label: 'Defuzzification method', kind: 'select', options: METHODS },
  { key: 'fuelGain', label: 'Fuel valve gain (bar/s)', kind: 'number', step: '0.05' },
  { key: 'outletGain', label: 'Outlet valve gain (bar/s)', kind: 'number', step: '0.05' },
  { key: 'fuelFlow', label: 'Fuel flow (base inflow)', kind: 'number', step: '0.05' },
  { key: 'baseOutflow', label: 'Base outflow', kind: 'number', step: '0.01' },
  { key: 'noise', label: 'Noise std (bar)', kind: 'number', step: '0.001' },
  { key: 'seed', label: 'Seed', kind: 'number', step: '1' },
  { key: 'delay', label: 'Valve delay (s)', kind: 'number', step: '0.1' },
  { key: 'actuatorDynamics', label: 'Actuator dynamics', kind: 'checkbox' },
  { key: 'bandPct', label: 'Settling band (%)', kind: 'select', options: [2, 5] },
  { key: 'showMembership', label: 'Show membership functions', kind: 'checkbox' },
]

export class App {
  readonly form: FormState
  private readonly api: ApiClient
  private readonly root: HTMLElement
  private readonly inputs = new Map<keyof FormState, HTMLInputElement | HTMLSelectElement>()
  private readonly errorSlots = new Map<keyof FormState, HTMLElement>()
  private runButton!: HTMLButtonElement
  private compareButton!: HTMLButtonElement
  private statusLine!: HTMLElement
  private resultsPane!: HTMLElement
  private membershipPane!: HTMLElement
  private comparePane!: HTMLElement
  private pending = false
  private lastResponse: SimulateResponse | null = null
  private readonly completedRuns: CompletedRun[] = []

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root
    this.api = api
    this.form = defaultFormState()
    this.render()
    this.refreshValidity()
  }

  private render(): void {
    this.root.replaceChildren()
    const layout = document.createElement('div')
    layout.className = 'layout'

    const formEl = document.createElement('form')
    formEl.className = 'settings'
    formEl.addEventListener('submit', (ev) => {
      ev.preventDefault()
      void this.run()
    })
    const heading = document.createElement('h2')
    heading.textContent = 'Simulation settings'
    formEl.appendChild(heading)

    for (const spec of FIELDS) formEl.appendChild(this.buildField(spec))

    this.runButton = document.createElement('button')
    this.runButton.type = 'submit'
    this.runButton.id = 'run-button'
    this.runButton.textContent = 'Run simulation'
    formEl.appendChild(this.runButton)

    this.compareButton = document.createElement('button')
    this.compareButton.type = 'button'
    this.compareButton.id = 'compare-button'
    this.compareButton.textContent = 'Add last run to comparison'
    this.compareButton.disabled = true
    this.compareButton.addEventListener('click', () => this.addToCompare())
    formEl.appendChild(this.compareButton)

    this.statusLine = document.createElement('p')
    this.statusLine.className = 'status'
    formEl.appendChild(this.statusLine)

    const output = document.createElement('section')
    output.className = 'output'
    this.resultsPane = document.createElement('div')
    this.resultsPane.id = 'results'
    this.membershipPane = document.createElement('div')
    this.membershipPane.id = 'membership'
    this.comparePane = document.createElement('div')
    this.comparePane.id = 'compare'
    output.append(this.resultsPane, this.membershipPane, this.comparePane)
    renderCompareView(this.comparePane, this.completedRuns)

    layout.append(formEl, output)
    this.root.appendChild(layout)
  }

  private buildField(spec: FieldSpec): HTMLElement {
    const wrap = document.createElement('label')
    wrap.className = 'field'
    const caption = document.createElement('span')
    caption.textContent = spec.label
    wrap.appendChild(caption)

    let input: HTMLInputElement | HTMLSelectElement
    if (spec.kind === 'select') {
      input = document.createElement('select')
      for (const option of spec.options ?? []) {
        const el = document.createElement('option')
        el.value = String(option)
        el.textContent = String(option)
        input.appendChild(el)
      }
      input.value = String(this.form[spec.key])
    } else {
      input = document.createElement('input')
      if (spec.kind === 'checkbox') {
        input.type = 'checkbox'
        input.checked = Boolean(this.form[spec.key])
      } else {
        input.type = 'number'
        input.step = spec.step ?? 'any'
        input.value = String(this.form[spec.key])
      }
    }
    input.id = `field-${spec.key}`
    input.addEventListener('input', () => {
      this.readField(spec, input)
      this.refreshValidity()
    })
    wrap.appendChild(input)

    const error = document.createElement('span')
    error.className = 'field-error'
    error.id = `error-${spec.key}`
    wrap.appendChild(error)

    this.inputs.set(spec.key, input)
    this.errorSlots.set(spec.key, error)
    return wrap
  }

  private readField(spec: FieldSpec, input: HTMLInputElement | HTMLSelectElement): void {
    const form = this.form as unknown as Record<string, unknown>
    if (spec.kind === 'checkbox') {
      form[spec.key] = (input as HTMLInputElement).checked
    } else if (spec.kind === 'select') {
      form[spec.key] = spec.key === 'bandPct' ? Number(input.value) : input.value
    } else {
      form[spec.key] = input.value === '' ? Number.NaN : Number(input.value)
    }
  }

  refreshValidity(): ReturnType<typeof validateForm> {
    const issues = validateForm(this.form)
    for (const [key, slot] of this.errorSlots) {
      const issue = issues.find((i) => i.field === key)
      slot.textContent = issue ? issue.message : ''
    }
    this.updateRunButton(issues.length > 0)
    return issues
  }

  // Button state only; error slots stay untouched so inline API messages
  // survive until the user edits the form again.
  private updateRunButton(invalid?: boolean): void {
    const blocked = invalid ?? validateForm(this.form).length > 0
    this.runButton.disabled = blocked || this.pending
  }

  async run(): Promise<void> {
    if (this.pending || this.refreshValidity().length > 0) return
    this.pending = true
    this.runButton.disabled = true
    this.statusLine.textContent = 'Running…'
    try {
      const response = await this.api.simulate(toRequest(this.form))
      this.lastResponse = response
      this.compareButton.disabled = false
      this.renderResults(response)
      this.statusLine.textContent = response.fault
        ? 'Run completed with controller fault samples.'
        : 'Run completed.'
    } catch (err) {
      if (err instanceof ApiError) {
        this.showApiErrors(err)
        this.statusLine.textContent = `Request rejected (HTTP ${err.status}).`
      } else {
        this.statusLine.textContent = `Service unreachable: ${(err as Error).message}`
      }
    } finally {
      this.pending = false
      this.updateRunButton()
    }
  }

  private showApiErrors(err: ApiError): void {
    for (const fieldError of err.errors) {
      const key = API_FIELD_TO_FORM[fieldError.field]
      const slot = key ? this.errorSlots.get(key) : undefined
      if (slot) slot.textContent = fieldError.message
    }
  }

  private renderResults(response: SimulateResponse): void {
    this.resultsPane.replaceChildren()
    this.membershipPane.replaceChildren()
    const { series } = response

    new LineChart(this.resultsPane, [
      { label: 'pressure', x: series.t, y: series.pressure, color: '#1f77b4' },
      { label: 'setpoint', x: series.t, y: series.setpoint, color: '#ff7f0e', dashed: true },
    ], { title: 'System pressure', xLabel: 'time, s', yLabel: 'pressure, bar' })

    new LineChart(this.resultsPane, [
      { label: 'fuel valve', x: series.t, y: series.fuel_eff, color: '#2ca02c' },
      { label: 'outlet valve', x: series.t, y: series.outlet_eff, color: '#d62728' },
    ], { title: 'Valve positions', xLabel: 'time, s', yLabel: 'position, %' })

    renderMetricsTable(this.resultsPane, response.metrics)

    if (this.form.showMembership && response.membership) {
      renderMembership(this.membershipPane, response.membership)
    }
  }

  addToCompare(): void {
    if (!this.lastResponse) return
    this.completedRuns.push({
      label: `${this.form.method} from ${this.form.initialPressure} bar`,
      method: this.form.method,
      response: this.lastResponse,
    })
    renderCompareView(this.comparePane, this.completedRuns)
  }

  get runs(): readonly CompletedRun[] {
    return this.completedRuns
  }
}
