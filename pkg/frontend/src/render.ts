/**
 * SVG painting of the view model.  Pure DOM, no framework: the canvas is
 * torn down and rebuilt per snapshot, with highlight classes applied to
 * whatever the last diff touched.
 */
import { layeredLayout } from './layout.js'
import type { Highlight, ViewModel } from './viewmodel.js'
import { edgeKey } from './viewmodel.js'

const SVG_NS = 'http://www.w3.org/2000/svg'

const FAMILY_COLORS: Record<string, string> = {
  B: '#8d99ae',
  S: '#1d7ea8',
  N: '#c0392b',
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag)
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value)
  return node
}

export function renderDag(
  container: HTMLElement,
  vm: ViewModel,
  highlight: Highlight | null,
): void {
  container.textContent = ''
  if (vm.emptyBadge) {
    const badge = document.createElement('div')
    badge.className = 'empty-badge'
    badge.textContent = 'standard sphere — empty presentation'
    container.appendChild(badge)
    return
  }
  const layout = layeredLayout(vm.nodes)
  const svg = el('svg', {
    width: String(layout.width),
    height: String(layout.height),
    viewBox: `0 0 ${layout.width} ${layout.height}`,
  })

  const defs = el('defs', {})
  const marker = el('marker', {
    id: 'arrowhead',
    markerWidth: '8',
    markerHeight: '8',
    refX: '7',
    refY: '3',
    orient: 'auto',
  })
  marker.appendChild(el('path', { d: 'M0,0 L7,3 L0,6 Z', fill: '#444' }))
  defs.appendChild(marker)
  svg.appendChild(defs)

  for (const link of vm.partnerLinks) {
    const a = layout.positions.get(link.from)
    const b = layout.positions.get(link.to)
    if (!a || !b) continue
    svg.appendChild(
      el('line', {
        x1: String(a.x),
        y1: String(a.y),
        x2: String(b.x),
        y2: String(b.y),
        class: 'partner-link',
      }),
    )
  }

  for (const edge of vm.edges) {
    const a = layout.positions.get(edge.from)
    const b = layout.positions.get(edge.to)
    if (!a || !b) continue
    const flashed = highlight?.edges.has(edgeKey(edge)) ? ' flash' : ''
    svg.appendChild(
      el('line', {
        x1: String(a.x),
        y1: String(a.y),
        x2: String(b.x),
        y2: String(b.y),
        class: `arrow${flashed}`,
        'marker-end': 'url(#arrowhead)',
      }),
    )
  }

  for (const node of vm.nodes) {
    const pos = layout.positions.get(node.id)
    if (!pos) continue
    const group = el('g', {
      class: `node${highlight?.nodes.has(node.id) ? ' flash' : ''}`,
      transform: `translate(${pos.x},${pos.y})`,
    })
    const color = FAMILY_COLORS[node.familyKind] ?? '#666'
    if (node.kind === 'knot') {
      group.appendChild(el('circle', { r: '16', fill: color, class: 'knot' }))
    } else {
      group.appendChild(
        el('circle', { r: '16', fill: 'white', stroke: color, 'stroke-width': '3' }),
      )
    }
    const glyph = el('text', {
      'text-anchor': 'middle',
      dy: '5',
      class: node.kind === 'knot' ? 'glyph knot-glyph' : 'glyph',
    })
    glyph.textContent = node.glyph
    group.appendChild(glyph)
    const caption = el('text', { 'text-anchor': 'middle', dy: '32', class: 'caption' })
    caption.textContent = node.id
    group.appendChild(caption)
    svg.appendChild(group)
  }
  container.appendChild(svg)
}

export function renderHistoryStrip(
  container: HTMLElement,
  cursor: number,
  historyLength: number,
): void {
  container.textContent = ''
  for (let index = 0; index < historyLength; index += 1) {
    const cell = document.createElement('span')
    cell.className = index === cursor ? 'history-cell current' : 'history-cell'
    cell.textContent = String(index)
    container.appendChild(cell)
  }
}
