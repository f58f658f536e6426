// Form state and client-side validation mirroring the API bounds, so bad
// input is blocked before any request leaves the browser.

import type { SimulateRequest } from './types'

export const METHODS = ['centroid', 'bisector', 'mom', 'lom', 'som'] as const

export interface FormState {
  setpoint: number
  initialPressure: number
  totalTime: number
  timeStep: number
  method: string
  fuelGain: number
  outletGain: number
  fuelFlow: number
  baseOutflow: number
  noise: number
  showMembership: boolean
  seed: number
  actuatorDynamics: boolean
  delay: number
  bandPct: number
}

// Simulation-settings defaults as served by the backend form.
export function defaultFormState(): FormState {
  return {
    setpoint: 5.0,
    initialPressure: 9.53,
    totalTime: 25.0,
    timeStep: 0.1,
    method: 'centroid',
    fuelGain: 2.75,
    outletGain: 2.75,
    fuelFlow: 1.0,
    baseOutflow: 0.500596,
    noise: 0.005,
    showMembership: false,
    seed: 42,
    actuatorDynamics: false,
    delay: 0.5,
    bandPct: 2,
  }
}

export interface ValidationIssue {
  field: keyof FormState
  message: string
}

function finiteNumber(v: number): boolean {
  return typeof v === 'number' && Number.isFinite(v)
}

// Same bounds the service enforces (400/422 on the wire).
export function validateForm(form: FormState): ValidationIssue[] {
  const issues: ValidationIssue[] = []
  const check = (field: keyof FormState, ok: boolean, message: string) => {
    if (!ok) issues.push({ field, message })
  }

  check('setpoint', finiteNumber(form.setpoint) && form.setpoint > 0 && form.setpoint <= 10,
    'setpoint must be in (0, 10] bar')
  check('initialPressure',
    finiteNumber(form.initialPressure) && form.initialPressure >= 0 && form.initialPressure <= 10,
    'initial pressure must be in [0, 10] bar')
  check('totalTime', finiteNumber(form.totalTime) && form.totalTime > 0 && form.totalTime <= 600,
    'total time must be in (0, 600] s')
  check('timeStep', finiteNumber(form.timeStep) && form.timeStep > 0 && form.timeStep <= 5,
    'time step must be in (0, 5] s')
  check('timeStep', !finiteNumber(form.totalTime) || !finiteNumber(form.timeStep)
    || form.timeStep <= form.totalTime, 'time step cannot exceed the total time')
  check('method', (METHODS as readonly string[]).includes(form.method),
    `method must be one of ${METHODS.join(', ')}`)
  check('fuelGain', finiteNumber(form.fuelGain) && form.fuelGain >= 0,
    'fuel valve gain must be >= 0')
  check('outletGain', finiteNumber(form.outletGain) && form.outletGain >= 0,
    'outlet valve gain must be >= 0')
  check('fuelFlow', finiteNumber(form.fuelFlow) && form.fuelFlow >= 0,
    'fuel flow must be >= 0')
  check('baseOutflow', finiteNumber(form.baseOutflow) && form.baseOutflow >= 0,
    'base outflow must be >= 0')
  check('noise', finiteNumber(form.noise) && form.noise >= 0,
    'noise standard deviation must be >= 0')
  check('seed', Number.isInteger(form.seed), 'seed must be an integer')
  check('delay', finiteNumber(form.delay) && form.delay >= 0, 'delay must be >= 0 s')
  check('bandPct', form.bandPct === 2 || form.bandPct === 5, 'band must be 2 or 5 %')
  return issues
}

export function toRequest(form: FormState): SimulateRequest {
  return {
    setpoint: form.setpoint,
    initial_pressure: form.initialPressure,
    total_time: form.totalTime,
    time_step: form.timeStep,
    method: form.method,
    fuel_gain: form.fuelGain,
    outlet_gain: form.outletGain,
    fuel_flow: form.fuelFlow,
    base_outflow: form.baseOutflow,
    noise: form.noise,
    show_membership: form.showMembership,
    seed: form.seed,
    actuator_dynamics: form.actuatorDynamics,
    delay: form.delay,
    band_pct: form.bandPct,
  }
}

export function fromRequest(req: SimulateRequest): FormState {
  return {
    setpoint: req.setpoint,
    initialPressure: req.initial_pressure,
    totalTime: req.total_time,
    timeStep: req.time_step,
    method: req.method,
    fuelGain: req.fuel_gain,
    outletGain: req.outlet_gain,
    fuelFlow: req.fuel_flow,
    baseOutflow: req.base_outflow,
    noise: req.noise,
    showMembership: req.show_membership,
    seed: req.seed,
    actuatorDynamics: req.actuator_dynamics,
    delay: req.delay,
    bandPct: req.band_pct,
  }
}

// Maps API error field names back onto form fields for inline display.
export const API_FIELD_TO_FORM: Record<string, keyof FormState> = {
  setpoint: 'setpoint',
  initial_pressure: 'initialPressure',
  total_time: 'totalTime',
  time_step: 'timeStep',
  method: 'method',
  fuel_gain: 'fuelGain',
  outlet_gain: 'outletGain',
  fuel_flow: 'fuelFlow',
  base_outflow: 'baseOutflow',
  noise: 'noise',
  seed: 'seed',
  delay: 'delay',
  band_pct: 'bandPct',
}
