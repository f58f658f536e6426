import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest'

import { ApiClient } from '../src/api'
import { App } from '../src/app'
import type { SimulateResponse } from '../src/types'

function fakeResponse(withMembership = false): SimulateResponse {
  const n = 11
  const t = Array.from({ length: n }, (_, i) => i * 0.1)
  const body: SimulateResponse = {
    series: {
      t,
      setpoint: t.map(() => 5),
      pressure: t.map((x) => 9.53 - 0.4 * x),
      fuel_cmd: t.map(() => 14),
      outlet_cmd: t.map(() => 85),
      fuel_eff: t.map(() => 14),
      outlet_eff: t.map(() => 85),
    },
    metrics: {
      mse: 3.4412, rmse: 1.8551, mae: 1.0498, iae: 26.35, ise: 86.0,
      itae: 93.33, sse: 0.001, rise_time: null, fall_time: 11.4,
      settling_time: 14.4, over_under_pct: 0.05, direction: 'fall',
    },
    fault: false,
  }
  if (withMembership) {
    const x = [0, 50, 100]
    body.membership = ['pressure_error', 'fuel_valve', 'outlet_valve'].map((name) => ({
      name, lower: 0, upper: 100, x,
      terms: [{ label: 'a', mu: [1, 0.5, 0] }, { label: 'b', mu: [0, 0.5, 1] }],
    }))
  }
  return body
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  })
}

function setNumberField(key: string, value: string): void {
  const input = document.getElementById(`field-${key}`) as HTMLInputElement
  input.value = value
  input.dispatchEvent(new Event('input'))
}

describe('App', () => {
  let fetchMock: ReturnType<typeof vi.fn>
  let root: HTMLElement

  beforeEach(() => {
    root = document.createElement('div')
    document.body.appendChild(root)
    fetchMock = vi.fn()
    vi.stubGlobal('fetch', fetchMock)
  })

  afterEach(() => {
    vi.unstubAllGlobals()
    document.body.replaceChildren()
  })

  it('one run renders two charts and the metrics table from the response', async () => {
    const body = fakeResponse()
    fetchMock.mockResolvedValue(jsonResponse(body))
    const app = new App(root, new ApiClient('http://api.test'))
    await app.run()

    const charts = root.querySelectorAll('#results svg')
    expect(charts).toHaveLength(2)
    const mse = root.querySelector('td[data-metric="mse"]')
    expect(mse!.textContent).toBe(body.metrics.mse.toFixed(4))
    const rise = root.querySelector('td[data-metric="rise_time"]')
    expect(rise!.textContent).toBe('—')
    expect(fetchMock).toHaveBeenCalledTimes(1)
    const [url, init] = fetchMock.mock.calls[0]
    expect(String(url)).toBe('http://api.test/api/simulate')
    const payload = JSON.parse((init as RequestInit).body as string)
    expect(payload.initial_pressure).toBe(9.53)
  })

  it('membership toggle adds exactly three extra plots', async () => {
    fetchMock.mockResolvedValue(jsonResponse(fakeResponse(true)))
    const app = new App(root, new ApiClient('http://api.test'))
    const checkbox = document.getElementById('field-showMembership') as HTMLInputElement
    checkbox.checked = true
    checkbox.dispatchEvent(new Event('input'))
    await app.run()

    expect(root.querySelectorAll('#results svg')).toHaveLength(2)
    expect(root.querySelectorAll('#membership svg')).toHaveLength(3)
  })

  it('invalid input disables the run button and sends nothing', async () => {
    fetchMock.mockResolvedValue(jsonResponse(fakeResponse()))
    const app = new App(root, new ApiClient('http://api.test'))
    setNumberField('noise', '-0.5')

    const button = document.getElementById('run-button') as HTMLButtonElement
    expect(button.disabled).toBe(true)
    const error = document.getElementById('error-noise')!
    expect(error.textContent).toContain('noise')
    await app.run()
    expect(fetchMock).not.toHaveBeenCalled()
  })

  it('API field errors appear inline next to the offending field', async () => {
    fetchMock.mockResolvedValue(jsonResponse(
      { errors: [{ field: 'initial_pressure', message: 'initial pressure must lie in [0, 10] bar' }] },
      422,
    ))
    const app = new App(root, new ApiClient('http://api.test'))
    await app.run()
    const slot = document.getElementById('error-initialPressure')!
    expect(slot.textContent).toContain('initial pressure')
  })

  it('compare flow: two runs produce two labelled traces', async () => {
    fetchMock.mockResolvedValue(jsonResponse(fakeResponse()))
    const app = new App(root, new ApiClient('http://api.test'))
    await app.run()
    app.addToCompare()
    const select = document.getElementById('field-method') as HTMLSelectElement
    select.value = 'lom'
    select.dispatchEvent(new Event('input'))
    await app.run()
    app.addToCompare()

    expect(app.runs).toHaveLength(2)
    const labels = [...root.querySelectorAll('#compare .legend-entry')]
      .map((el) => el.textContent)
    expect(labels.some((l) => l!.startsWith('centroid'))).toBe(true)
    expect(labels.some((l) => l!.startsWith('lom'))).toBe(true)
  })

  it('empty compare pane shows the empty-state message', () => {
    fetchMock.mockResolvedValue(jsonResponse(fakeResponse()))
    new App(root, new ApiClient('http://api.test'))
    expect(root.querySelector('#compare .compare-empty')).not.toBeNull()
  })
})
