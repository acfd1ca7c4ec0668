/**
 * Layered DAG layout: one column per depth, deepest (minimal elements) on
 * the right; rows keep partners near each other by sorting on family key.
 */
import type { NodeVM } from './viewmodel.js'

export interface Position {
  x: number
  y: number
}

export interface Layout {
  positions: Map<string, Position>
  width: number
  height: number
}

export const COLUMN_WIDTH = 190
export const ROW_HEIGHT = 64
export const MARGIN = 60

export function layeredLayout(nodes: NodeVM[]): Layout {
  const positions = new Map<string, Position>()
  if (nodes.length === 0) {
    return { positions, width: 2 * MARGIN, height: 2 * MARGIN }
  }
  const maxDepth = Math.max(...nodes.map((n) => n.depth))
  const byLayer = new Map<number, NodeVM[]>()
  for (const n of nodes) {
    const layer = byLayer.get(n.depth) ?? []
    layer.push(n)
    byLayer.set(n.depth, layer)
  }
  let tallest = 0
  for (const [depth, layer] of byLayer) {
    layer.sort((a, b) =>
      a.familyKey === b.familyKey
        ? a.id.localeCompare(b.id)
        : a.familyKey.localeCompare(b.familyKey),
    )
    tallest = Math.max(tallest, layer.length)
    layer.forEach((n, row) => {
      positions.set(n.id, {
        x: MARGIN + (maxDepth - depth) * COLUMN_WIDTH,
        y: MARGIN + row * ROW_HEIGHT,
      })
    })
  }
  return {
    positions,
    width: 2 * MARGIN + (maxDepth - 1) * COLUMN_WIDTH + 120,
    height: 2 * MARGIN + (tallest - 1) * ROW_HEIGHT + 40,
  }
}
