// Thin client for the splitfuzz service. The base URL is configurable so the
// UI can point at any deployment.

import type { FieldError, MembershipVariable, SimulateRequest, SimulateResponse } from './types'

export class ApiError extends Error {
  readonly status: number
  readonly errors: FieldError[]

  constructor(status: number, errors: FieldError[]) {
    super(errors.map((e) => `${e.field}: ${e.message}`).join('; ') || `HTTP ${status}`)
    this.status = status
    this.errors = errors
  }
}

export class ApiClient {
  readonly baseUrl: string

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/+$/, '')
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(`${this.baseUrl}${path}`, init)
    if (!resp.ok) {
      let errors: FieldError[] = []
      try {
        const body = await resp.json()
        if (Array.isArray(body.errors)) errors = body.errors
      } catch {
        // non-JSON error body: fall through with the bare status
      }
      throw new ApiError(resp.status, errors)
    }
    return (await resp.json()) as T
  }

  simulate(req: SimulateRequest): Promise<SimulateResponse> {
    return this.request<SimulateResponse>('/api/simulate', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(req),
    })
  }

  async membership(): Promise<MembershipVariable[]> {
    const body = await this.request<{ variables: MembershipVariable[] }>('/api/membership')
    return body.variables
  }

  async methods(): Promise<string[]> {
    const body = await this.request<{ methods: string[] }>('/api/methods')
    return body.methods
  }
}
