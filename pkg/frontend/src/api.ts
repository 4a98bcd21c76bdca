// Typed client for the hub's JSON endpoints. All search semantics live on
// the server; this file only shapes requests and parses responses.

export const SEGMENT_TYPES = [
  'theorem',
  'lemma',
  'definition',
  'proof',
  'corollary',
  'remark',
  'example',
  'other',
] as const;

export type SegmentType = (typeof SEGMENT_TYPES)[number];

export interface Suggestion {
  display: string;
  source: 'ONTOLOGY' | 'ALIGNED_EXTERNAL';
  conceptId?: string;
  externalIri?: string;
}

export interface SearchHit {
  conceptId: string;
  symbol: string;
  formulaId: string;
  markup: string;
  segmentType: SegmentType;
  articleId: string;
}

export interface SearchResponse {
  total: number;
  page: number;
  pageSize: number;
  hits: SearchHit[];
}

export interface FormulaDetails {
  formulaId: string;
  markup: string;
  concepts: { conceptId: string; symbol: string }[];
  segment: { segmentId: string; type: SegmentType; text: string };
  textOccurrences: { surface: string; conceptId: string }[];
  article: {
    articleId: string;
    title: string;
    authors: string[];
    year: number;
    metadataUrl?: string;
    pdfUrl?: string;
  };
}

export interface SearchParams {
  conceptId: string;
  subclasses: boolean;
  segments: SegmentType[];
  page: number;
  pageSize: number;
}

export class HttpError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

const CLASS_ID = /^E[1-9][0-9]*$/;

// Client-side mirrors of the server's parameter preconditions, so the UI
// never issues a request the API would reject as 400.
export function validSuggestQuery(q: string, limit: number): boolean {
  return q.trim().length > 0 && Number.isInteger(limit) && limit >= 1 && limit <= 50;
}

export function validSearchParams(p: SearchParams): boolean {
  return (
    CLASS_ID.test(p.conceptId) &&
    Number.isInteger(p.page) &&
    p.page >= 1 &&
    Number.isInteger(p.pageSize) &&
    p.pageSize >= 1 &&
    p.pageSize <= 100 &&
    p.segments.every((s) => (SEGMENT_TYPES as readonly string[]).includes(s))
  );
}

async function getJson<T>(url: string): Promise<T> {
  const resp = await fetch(url, { headers: { accept: 'application/json' } });
  if (!resp.ok) {
    let message = `HTTP ${resp.status}`;
    try {
      const body = (await resp.json()) as { error?: string };
      if (body.error) message = body.error;
    } catch {
      // non-JSON error body, keep the status text
    }
    throw new HttpError(resp.status, message);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private baseUrl = '') {}

  async suggest(q: string, limit = 10): Promise<Suggestion[]> {
    if (!validSuggestQuery(q, limit)) throw new Error(`invalid suggest query ${JSON.stringify(q)}`);
    const params = new URLSearchParams({ q, limit: String(limit) });
    return getJson(`${this.baseUrl}/api/suggest?${params}`);
  }

  async search(p: SearchParams): Promise<SearchResponse> {
    if (!validSearchParams(p)) throw new Error('invalid search parameters');
    const params = new URLSearchParams({
      concept: p.conceptId,
      subclasses: String(p.subclasses),
      page: String(p.page),
      pageSize: String(p.pageSize),
    });
    if (p.segments.length) params.set('segments', p.segments.join(','));
    return getJson(`${this.baseUrl}/api/search?${params}`);
  }

  async formulaDetails(formulaId: string): Promise<FormulaDetails> {
    return getJson(`${this.baseUrl}/api/formulas/${encodeURIComponent(formulaId)}`);
  }

  conceptUrl(conceptId: string): string {
    return `${this.baseUrl}/ontology/${conceptId}`;
  }
}
