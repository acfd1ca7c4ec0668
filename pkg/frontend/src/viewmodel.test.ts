import { readFileSync } from 'node:fs'
import { dirname, join } from 'node:path'
import { fileURLToPath } from 'node:url'
import { describe, expect, it } from 'vitest'

import type { ApplyBody, OpsBody, PresentationBody } from './types.js'
import {
  buildViewModel,
  componentDepths,
  dagFingerprint,
  describeOp,
  diffHighlight,
  withWitness,
} from './viewmodel.js'

const here = dirname(fileURLToPath(import.meta.url))

function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, 'fixtures', name), 'utf-8')) as T
}

const presentation0 = fixture<PresentationBody>('presentation0.json')
const ops0 = fixture<OpsBody>('ops0.json')
const apply1 = fixture<ApplyBody>('apply1.json')
const ops1 = fixture<OpsBody>('ops1.json')
const undoBody = fixture<PresentationBody>('undo.json')
const presentation2 = fixture<PresentationBody>('presentation2.json')
const ops2 = fixture<OpsBody>('ops2.json')
const emptyBody = fixture<PresentationBody>('empty.json')

describe('palette', () => {
  it('lists exactly the ops the service reports, in order', () => {
    const vm = buildViewModel(presentation0, ops0)
    expect(vm.palette.length).toBe(ops0.ops.length)
    expect(vm.palette.map((e) => e.candidate)).toEqual(ops0.ops)
  })

  it('marks unsatisfied candidates as not issuable', () => {
    const vm = buildViewModel(presentation2, ops2)
    const hopf = vm.palette.filter((e) => e.candidate.op.kind === 'CancelHopf')
    expect(hopf.length).toBeGreaterThan(0)
    for (const entry of hopf) {
      expect(entry.issuable).toBe(false)
      expect(entry.needsWitness).toBe(true)
    }
    const cancel = vm.palette.find((e) => e.candidate.op.kind === 'CancelKnotCircle')
    expect(cancel?.issuable).toBe(true)
  })

  it('only satisfied candidates are issuable', () => {
    for (const body of [ops0, ops1, ops2]) {
      const vm = buildViewModel(presentation0, body)
      for (const entry of vm.palette) {
        expect(entry.issuable).toBe(entry.candidate.satisfied)
      }
    }
  })

  it('adds the witness assertion without mutating the candidate', () => {
    const op = { kind: 'CancelHopf', knot: 'b(1)' }
    const asserted = withWitness(op)
    expect(asserted.isSplitHopf).toBe(true)
    expect(op).not.toHaveProperty('isSplitHopf')
  })

  it('describes every op kind', () => {
    for (const row of ops2.ops) {
      expect(describeOp(row.op)).toBeTruthy()
    }
  })
})

describe('dag projection', () => {
  it('computes depths as 1 + min over outgoing arrows', () => {
    const payload = presentation0.document.payload
    const depths = componentDepths(payload.components, payload.arrows)
    expect(depths.get('b(-1)')).toBe(1)
    expect(depths.get('b(1)')).toBe(1)
    expect(depths.get('S(-1,1)#0')).toBe(1)
    expect(depths.get("b'(-1)")).toBe(2)
    expect(depths.get("b'(1)")).toBe(2)
    expect(depths.get("S'(-1,1)#0")).toBe(3)
    expect(depths.get("N'(1,-1)#0")).toBe(3)
  })

  it('projects one node per component and one edge per arrow', () => {
    const vm = buildViewModel(presentation0, ops0)
    expect(vm.nodes.length).toBe(presentation0.document.payload.components.length)
    expect(vm.edges.length).toBe(presentation0.document.payload.arrows.length)
    expect(vm.emptyBadge).toBe(false)
    const knot = vm.nodes.find((n) => n.id === 'b(-1)')
    expect(knot?.glyph).toBe('0')
    expect(knot?.partner).toBe("b'(-1)")
  })

  it('pairs each knot with its linking circle exactly once', () => {
    const vm = buildViewModel(presentation0, ops0)
    expect(vm.partnerLinks.length).toBe(vm.nodes.length / 2)
    const seen = new Set(vm.partnerLinks.flatMap((l) => [l.from, l.to]))
    expect(seen.size).toBe(vm.nodes.length)
  })

  it('shows the standard-sphere badge on the empty presentation', () => {
    const vm = buildViewModel(emptyBody, { ops: [], offset: 0, limit: 500, capped: false })
    expect(vm.emptyBadge).toBe(true)
    expect(vm.nodes).toEqual([])
  })
})

describe('apply and undo', () => {
  it('apply changes the rendered DAG and undo restores it exactly', () => {
    const before = buildViewModel(presentation0, ops0)
    const after = buildViewModel(apply1, ops1)
    const restored = buildViewModel(undoBody, ops0)
    expect(dagFingerprint(after)).not.toBe(dagFingerprint(before))
    expect(dagFingerprint(restored)).toBe(dagFingerprint(before))
    expect(restored.cursor).toBe(0)
    expect(after.cursor).toBe(1)
  })

  it('diff highlight covers exactly what the diff touched', () => {
    const h = diffHighlight(apply1.diff)
    expect(h.nodes).toEqual(new Set(['b(-1)']))
    expect(h.edges.size).toBe(0)
  })

  it('view model is a pure projection: rebuilding gives the same result', () => {
    const a = buildViewModel(presentation0, ops0)
    const b = buildViewModel(presentation0, ops0)
    expect(a).toEqual(b)
  })
})
