/**
 * Wire types mirroring the session service's JSON bodies.
 */

export interface FamilyJson {
  kind: 'B' | 'S' | 'N'
  i: number
  j?: number
  curve?: number
}

export interface ComponentJson {
  id: string
  kind: 'knot' | 'linking_circle'
  family: FamilyJson
  label: string
  framing: number
  partner: string
}

export type ArrowJson = [string, string]

export interface PresentationPayload {
  components: ComponentJson[]
  arrows: ArrowJson[]
  provenance: unknown[]
}

export interface DocumentJson {
  formatVersion: number
  kind: string
  payload: PresentationPayload
  metadata: Record<string, string>
}

export interface PresentationBody {
  document: DocumentJson
  cursor: number
  historyLength: number
}

export interface OpJson {
  kind: string
  targets?: string[]
  aprime?: string[]
  knot?: string
  isSplitHopf?: boolean
  alpha?: string
  betaPrime?: string
  variant?: string
}

export interface OpCandidate {
  op: OpJson
  satisfied: boolean
  unsatisfied: string[]
}

export interface OpsBody {
  ops: OpCandidate[]
  offset: number
  limit: number
  capped: boolean
}

export interface DiffJson {
  addedComponents: ComponentJson[]
  removedComponents: ComponentJson[]
  labelChanges: [string, string, string][]
  addedArrows: ArrowJson[]
  removedArrows: ArrowJson[]
  notes: string[]
}

export interface ApplyBody extends PresentationBody {
  diff: DiffJson
}

export interface HistoryBody {
  cursor: number
  snapshots: { index: number; diff: DiffJson | null }[]
}

export interface ServiceError {
  error: string
  message: string
}
