// Entry point: resolve the API base URL (?api=... beats the global default)
// and mount the app.

import { ApiClient } from './api'
import { App } from './app'

declare global {
  interface Window {
    SPLITFUZZ_API?: string
  }
}

export function resolveBaseUrl(): string {
  const params = new URLSearchParams(window.location.search)
  return params.get('api') ?? window.SPLITFUZZ_API ?? 'http://127.0.0.1:8000'
}

const rootEl = document.getElementById('app')
if (rootEl) {
  new App(rootEl, new ApiClient(resolveBaseUrl()))
}
