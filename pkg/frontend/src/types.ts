// Wire shapes of the splitfuzz HTTP API.

export interface SimulateRequest {
  setpoint: number
  initial_pressure: number
  total_time: number
  time_step: number
  method: string
  fuel_gain: number
  outlet_gain: number
  fuel_flow: number
  base_outflow: number
  noise: number
  show_membership: boolean
  seed: number
  actuator_dynamics: boolean
  delay: number
  band_pct: number
}

export interface SeriesArrays {
  t: number[]
  setpoint: number[]
  pressure: number[]
  fuel_cmd: number[]
  outlet_cmd: number[]
  fuel_eff: number[]
  outlet_eff: number[]
}

export interface MetricsReport {
  mse: number
  rmse: number
  mae: number
  iae: number
  ise: number
  itae: number
  sse: number
  rise_time: number | null
  fall_time: number | null
  settling_time: number | null
  over_under_pct: number
  direction: string
}

export interface MembershipTerm {
  label: string
  mu: number[]
}

export interface MembershipVariable {
  name: string
  lower: number
  upper: number
  x: number[]
  terms: MembershipTerm[]
}

export interface SimulateResponse {
  series: SeriesArrays
  metrics: MetricsReport
  fault: boolean
  membership?: MembershipVariable[]
}

export interface FieldError {
  field: string
  message: string
}

export interface CompletedRun {
  label: string
  method: string
  response: SimulateResponse
}
