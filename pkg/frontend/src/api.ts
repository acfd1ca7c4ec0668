/**
 * Thin client for the session service.  All domain logic stays on the
 * server; this module only moves JSON and turns HTTP failures into typed
 * errors.
 */
import type { ApplyBody, HistoryBody, OpJson, OpsBody, PresentationBody } from './types.js'

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>

/** A 409 from the service: the move's precondition failed. */
export class PreconditionError extends Error {
  readonly code: string
  constructor(code: string, message: string) {
    super(message)
    this.code = code
  }
}

/** The service could not be reached at all. */
export class OfflineError extends Error {}

export class ApiClient {
  private readonly base: string
  private readonly fetchFn: FetchLike

  constructor(base: string, fetchFn: FetchLike = (url, init) => fetch(url, init)) {
    this.base = base.replace(/\/$/, '')
    this.fetchFn = fetchFn
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response
    try {
      response = await this.fetchFn(this.base + path, init)
    } catch (err) {
      throw new OfflineError(`service unreachable: ${String(err)}`)
    }
    const body = await response.json()
    if (response.status === 409) {
      throw new PreconditionError(body.error ?? 'conflict', body.message ?? 'rejected')
    }
    if (!response.ok) {
      throw new Error(`${response.status}: ${body.message ?? body.error ?? 'request failed'}`)
    }
    return body as T
  }

  presentation(): Promise<PresentationBody> {
    return this.request<PresentationBody>('/presentation')
  }

  ops(offset = 0, limit = 500): Promise<OpsBody> {
    return this.request<OpsBody>(`/ops?offset=${offset}&limit=${limit}`)
  }

  apply(op: OpJson): Promise<ApplyBody> {
    return this.request<ApplyBody>('/apply', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ op }),
    })
  }

  undo(): Promise<PresentationBody> {
    return this.request<PresentationBody>('/undo', { method: 'POST' })
  }

  redo(): Promise<PresentationBody> {
    return this.request<PresentationBody>('/redo', { method: 'POST' })
  }

  history(): Promise<HistoryBody> {
    return this.request<HistoryBody>('/history')
  }
}
