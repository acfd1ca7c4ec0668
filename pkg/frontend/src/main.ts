/**
 * Wiring: fetch state, render, surface the op palette, apply moves.
 * One mutation in flight at a time; every successful mutation re-reads the
 * service, so the page is always reconstructible by a plain refresh.
 */
import { ApiClient, OfflineError, PreconditionError } from './api.js'
import { renderDag, renderHistoryStrip } from './render.js'
import {
  buildViewModel,
  diffHighlight,
  withWitness,
  type Highlight,
  type PaletteEntry,
  type ViewModel,
} from './viewmodel.js'

const params = new URLSearchParams(window.location.search)
const base = params.get('service') ?? 'http://127.0.0.1:8642'
const api = new ApiClient(base)

const canvas = document.getElementById('canvas') as HTMLElement
const paletteBox = document.getElementById('palette') as HTMLElement
const historyBox = document.getElementById('history') as HTMLElement
const banner = document.getElementById('banner') as HTMLElement
const errorBox = document.getElementById('error') as HTMLElement

let inFlight = false
let lastHighlight: Highlight | null = null

function showError(text: string): void {
  errorBox.textContent = text
  errorBox.style.display = text ? 'block' : 'none'
}

function renderPalette(vm: ViewModel): void {
  paletteBox.textContent = ''
  if (vm.palette.length === 0) {
    const empty = document.createElement('div')
    empty.className = 'palette-empty'
    empty.textContent = 'no applicable operations'
    paletteBox.appendChild(empty)
    return
  }
  for (const entry of vm.palette) {
    paletteBox.appendChild(paletteButton(entry))
  }
}

function paletteButton(entry: PaletteEntry): HTMLElement {
  const row = document.createElement('div')
  row.className = 'palette-row'
  const button = document.createElement('button')
  button.textContent = entry.label
  button.disabled = !entry.issuable && !entry.needsWitness
  button.onclick = () => {
    if (entry.issuable) {
      void applyOp(entry.candidate.op)
      return
    }
    if (entry.needsWitness) {
      // The splitness of a Hopf pair is a geometric fact the tool cannot
      // see; the human asserts it explicitly.
      const ok = window.confirm(
        `${entry.label}\n\nAssert that this pair is a split Hopf sublink?`,
      )
      if (ok) void applyOp(withWitness(entry.candidate.op))
    }
  }
  row.appendChild(button)
  if (!entry.candidate.satisfied) {
    const why = document.createElement('span')
    why.className = 'unsatisfied'
    why.textContent = entry.candidate.unsatisfied.join(', ')
    row.appendChild(why)
  }
  return row
}

async function refresh(): Promise<void> {
  try {
    const [presentation, ops] = await Promise.all([api.presentation(), api.ops()])
    const vm = buildViewModel(presentation, ops)
    banner.style.display = 'none'
    renderDag(canvas, vm, lastHighlight)
    renderPalette(vm)
    renderHistoryStrip(historyBox, vm.cursor, vm.historyLength)
  } catch (err) {
    if (err instanceof OfflineError) {
      banner.style.display = 'block'
      return
    }
    showError(String(err))
  }
}

async function applyOp(op: Parameters<typeof api.apply>[0]): Promise<void> {
  if (inFlight) return
  inFlight = true
  showError('')
  try {
    const body = await api.apply(op)
    lastHighlight = diffHighlight(body.diff)
    await refresh()
  } catch (err) {
    if (err instanceof PreconditionError) {
      showError(`${err.code}: ${err.message}`)
    } else if (err instanceof OfflineError) {
      banner.style.display = 'block'
    } else {
      showError(String(err))
    }
  } finally {
    inFlight = false
  }
}

async function navigate(direction: 'undo' | 'redo'): Promise<void> {
  if (inFlight) return
  inFlight = true
  showError('')
  try {
    await (direction === 'undo' ? api.undo() : api.redo())
    lastHighlight = null
    await refresh()
  } catch (err) {
    if (err instanceof PreconditionError) {
      showError(`${err.code}: ${err.message}`)
    } else {
      showError(String(err))
    }
  } finally {
    inFlight = false
  }
}

;(document.getElementById('undo') as HTMLButtonElement).onclick = () => void navigate('undo')
;(document.getElementById('redo') as HTMLButtonElement).onclick = () => void navigate('redo')
;(document.getElementById('reload') as HTMLButtonElement).onclick = () => {
  lastHighlight = null
  void refresh()
}

void refresh()
