import { readFileSync } from 'node:fs'
import { dirname, join } from 'node:path'
import { fileURLToPath } from 'node:url'
import { describe, expect, it } from 'vitest'

import { COLUMN_WIDTH, MARGIN, layeredLayout } from './layout.js'
import type { OpsBody, PresentationBody } from './types.js'
import { buildViewModel } from './viewmodel.js'

const here = dirname(fileURLToPath(import.meta.url))

function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, 'fixtures', name), 'utf-8')) as T
}

const presentation0 = fixture<PresentationBody>('presentation0.json')
const ops0 = fixture<OpsBody>('ops0.json')

describe('layered layout', () => {
  it('places every node, one column per depth, deepest first', () => {
    const vm = buildViewModel(presentation0, ops0)
    const layout = layeredLayout(vm.nodes)
    expect(layout.positions.size).toBe(vm.nodes.length)
    const xsByDepth = new Map<number, Set<number>>()
    for (const node of vm.nodes) {
      const pos = layout.positions.get(node.id)
      expect(pos).toBeDefined()
      const xs = xsByDepth.get(node.depth) ?? new Set()
      xs.add(pos!.x)
      xsByDepth.set(node.depth, xs)
    }
    // same depth, same column
    for (const xs of xsByDepth.values()) expect(xs.size).toBe(1)
    // greater depth sits further left
    const columns = [...xsByDepth.entries()].sort((a, b) => a[0] - b[0])
    for (let n = 1; n < columns.length; n += 1) {
      const [, prev] = columns[n - 1]!
      const [, next] = columns[n]!
      expect([...next][0]!).toBeLessThan([...prev][0]!)
    }
  })

  it('separates rows inside a column', () => {
    const vm = buildViewModel(presentation0, ops0)
    const layout = layeredLayout(vm.nodes)
    const byColumn = new Map<number, number[]>()
    for (const pos of layout.positions.values()) {
      const ys = byColumn.get(pos.x) ?? []
      ys.push(pos.y)
      byColumn.set(pos.x, ys)
    }
    for (const ys of byColumn.values()) {
      expect(new Set(ys).size).toBe(ys.length)
    }
  })

  it('a three-layer chain makes three columns', () => {
    const nodes = [
      { id: 'a', kind: 'knot', glyph: '0', familyKey: 'B(1)', familyKind: 'B', depth: 3, partner: 'x' },
      { id: 'b', kind: 'knot', glyph: '0', familyKey: 'B(2)', familyKind: 'B', depth: 2, partner: 'y' },
      { id: 'c', kind: 'knot', glyph: '0', familyKey: 'B(3)', familyKind: 'B', depth: 1, partner: 'z' },
    ] as const
    const layout = layeredLayout([...nodes])
    expect(layout.positions.get('a')!.x).toBe(MARGIN)
    expect(layout.positions.get('b')!.x).toBe(MARGIN + COLUMN_WIDTH)
    expect(layout.positions.get('c')!.x).toBe(MARGIN + 2 * COLUMN_WIDTH)
  })

  it('handles the empty presentation', () => {
    const layout = layeredLayout([])
    expect(layout.positions.size).toBe(0)
  })
})
