/**
 * Pure projection of service responses into what the canvas draws.
 * No domain state lives here: rebuilding from GET /presentation and
 * GET /ops after a refresh yields the identical view model.
 */
import type {
  ComponentJson,
  DiffJson,
  OpCandidate,
  OpJson,
  OpsBody,
  PresentationBody,
} from './types.js'

export interface NodeVM {
  id: string
  kind: 'knot' | 'linking_circle'
  glyph: string
  familyKey: string
  familyKind: 'B' | 'S' | 'N'
  depth: number
  partner: string
}

export interface EdgeVM {
  from: string
  to: string
}

export interface PaletteEntry {
  candidate: OpCandidate
  /** Only satisfied candidates may be sent to the service. */
  issuable: boolean
  /** Split-Hopf cancellation waits for an explicit user assertion. */
  needsWitness: boolean
  label: string
}

export interface ViewModel {
  nodes: NodeVM[]
  edges: EdgeVM[]
  partnerLinks: EdgeVM[]
  palette: PaletteEntry[]
  emptyBadge: boolean
  cursor: number
  historyLength: number
}

/** Depth: 1 on components with no outgoing arrows, else 1 + min successor. */
export function componentDepths(
  components: ComponentJson[],
  arrows: [string, string][],
): Map<string, number> {
  const out = new Map<string, string[]>()
  for (const c of components) out.set(c.id, [])
  for (const [src, dst] of arrows) {
    out.get(src)?.push(dst)
  }
  const depths = new Map<string, number>()
  const visit = (id: string): number => {
    const known = depths.get(id)
    if (known !== undefined) return known
    const succ = out.get(id) ?? []
    const value = succ.length === 0 ? 1 : 1 + Math.min(...succ.map(visit))
    depths.set(id, value)
    return value
  }
  for (const c of components) visit(c.id)
  return depths
}

function familyKey(c: ComponentJson): string {
  if (c.family.kind === 'B') return `B(${c.family.i})`
  return `${c.family.kind}(${c.family.i},${c.family.j})`
}

export function describeOp(op: OpJson): string {
  switch (op.kind) {
    case 'MakeAbstract':
      return `make abstract ${(op.targets ?? []).join(', ')}`
    case 'MakeConcrete':
      return `make concrete ${(op.aprime ?? []).join(', ')}`
    case 'CancelKnotCircle':
      return `cancel ${op.knot} with its circle`
    case 'CancelHopf':
      return `cancel split Hopf pair at ${op.knot}`
    case 'Slide':
      return `slide ${op.alpha} over ${op.betaPrime} (${op.variant})`
    default:
      return op.kind
  }
}

export function buildViewModel(presentation: PresentationBody, ops: OpsBody): ViewModel {
  const payload = presentation.document.payload
  const depths = componentDepths(payload.components, payload.arrows)
  const nodes: NodeVM[] = payload.components.map((c) => ({
    id: c.id,
    kind: c.kind,
    glyph: c.label,
    familyKey: familyKey(c),
    familyKind: c.family.kind,
    depth: depths.get(c.id) ?? 1,
    partner: c.partner,
  }))
  const edges: EdgeVM[] = payload.arrows.map(([from, to]) => ({ from, to }))
  const partnerLinks: EdgeVM[] = []
  const seen = new Set<string>()
  for (const c of payload.components) {
    if (seen.has(c.id) || seen.has(c.partner)) continue
    seen.add(c.id)
    partnerLinks.push({ from: c.id, to: c.partner })
  }
  const palette: PaletteEntry[] = ops.ops.map((candidate) => ({
    candidate,
    issuable: candidate.satisfied,
    needsWitness: candidate.unsatisfied.includes('not-split'),
    label: describeOp(candidate.op),
  }))
  return {
    nodes,
    edges,
    partnerLinks,
    palette,
    emptyBadge: payload.components.length === 0,
    cursor: presentation.cursor,
    historyLength: presentation.historyLength,
  }
}

export interface Highlight {
  nodes: Set<string>
  edges: Set<string>
}

export const edgeKey = (e: EdgeVM): string => `${e.from}→${e.to}`

/** Everything the last diff touched, for the post-apply flash. */
export function diffHighlight(diff: DiffJson): Highlight {
  const nodes = new Set<string>()
  for (const c of diff.addedComponents) nodes.add(c.id)
  for (const c of diff.removedComponents) nodes.add(c.id)
  for (const [id] of diff.labelChanges) nodes.add(id)
  const edges = new Set<string>()
  for (const [from, to] of diff.addedArrows) edges.add(edgeKey({ from, to }))
  for (const [from, to] of diff.removedArrows) edges.add(edgeKey({ from, to }))
  return { nodes, edges }
}

/** The DAG part of the view: what apply→undo must restore exactly. */
export function dagFingerprint(vm: ViewModel): string {
  const nodes = vm.nodes
    .map((n) => `${n.id}|${n.glyph}|${n.depth}`)
    .sort()
    .join(';')
  const edges = vm.edges.map(edgeKey).sort().join(';')
  return `${nodes}#${edges}`
}

/** Attach the witness assertion to a split-Hopf candidate. */
export function withWitness(op: OpJson): OpJson {
  return { ...op, isSplitHopf: true }
}
