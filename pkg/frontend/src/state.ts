import { SEGMENT_TYPES, type SearchResponse, type SegmentType, type Suggestion } from './api.js';

export interface UiState {
  queryText: string;
  chosenSuggestion?: Suggestion;
  segmentChecks: Record<SegmentType, boolean>;
  subclassesToggle: boolean;
  currentPage: number;
  results?: SearchResponse;
  detailsOpen?: string;
}

export function initialState(): UiState {
  const checks = {} as Record<SegmentType, boolean>;
  for (const t of SEGMENT_TYPES) checks[t] = true;
  return {
    queryText: '',
    segmentChecks: checks,
    subclassesToggle: true,
    currentPage: 1,
  };
}

/** Checked segment types as the request filter. All boxes checked (the
 * default) and no boxes checked both mean "no restriction", which the API
 * spells as an empty filter. */
export function segmentsForRequest(checks: Record<SegmentType, boolean>): SegmentType[] {
  const picked = SEGMENT_TYPES.filter((t) => checks[t]);
  return picked.length === SEGMENT_TYPES.length ? [] : picked;
}

/** How many rows the current page must render: min(pageSize, total - skipped). */
export function expectedRowCount(total: number, page: number, pageSize: number): number {
  return Math.min(pageSize, Math.max(0, total - (page - 1) * pageSize));
}

/** Monotonic ticket counter per request flow; stale responses (a ticket
 * older than the last issued) must be dropped, never rendered. */
export class SequenceGate {
  private last = 0;

  issue(): number {
    return ++this.last;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.last;
  }
}
