import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';

import {
  ApiClient,
  validSearchParams,
  validSuggestQuery,
  type SearchHit,
  type SearchResponse,
  type Suggestion,
} from '../src/api.js';
import { initApp, type App } from '../src/app.js';
import { debounce } from '../src/debounce.js';
import { SequenceGate, expectedRowCount, initialState, segmentsForRequest } from '../src/state.js';
import { mountPage, rows, setCheckbox, suggestionTexts, type, waitFor } from './helpers.js';

function jsonResponse(body: unknown, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  } as Response;
}

function deferred<T>() {
  let resolve!: (value: T) => void;
  const promise = new Promise<T>((r) => (resolve = r));
  return { promise, resolve };
}

const CHEB: Suggestion[] = [
  { display: 'Chebyshev iterative method', source: 'ONTOLOGY', conceptId: 'E660' },
];

function hit(overrides: Partial<SearchHit> = {}): SearchHit {
  return {
    conceptId: 'E660',
    symbol: 'x',
    formulaId: 'f1',
    markup: 'x = y',
    segmentType: 'theorem',
    articleId: 'a1',
    ...overrides,
  };
}

function searchResponse(hits: SearchHit[], total = hits.length, page = 1): SearchResponse {
  return { total, page, pageSize: 20, hits };
}

describe('state helpers', () => {
  it('starts with every segment on, subclasses on, page 1', () => {
    const state = initialState();
    expect(Object.values(state.segmentChecks).every(Boolean)).toBe(true);
    expect(state.subclassesToggle).toBe(true);
    expect(state.currentPage).toBe(1);
    expect(state.chosenSuggestion).toBeUndefined();
  });

  it('maps all-checked and none-checked to an empty filter', () => {
    const state = initialState();
    expect(segmentsForRequest(state.segmentChecks)).toEqual([]);
    for (const key of Object.keys(state.segmentChecks)) {
      state.segmentChecks[key as keyof typeof state.segmentChecks] = false;
    }
    expect(segmentsForRequest(state.segmentChecks)).toEqual([]);
    state.segmentChecks.theorem = true;
    state.segmentChecks.proof = true;
    expect(segmentsForRequest(state.segmentChecks)).toEqual(['theorem', 'proof']);
  });

  it('computes the row count the page must render', () => {
    expect(expectedRowCount(25, 1, 20)).toBe(20);
    expect(expectedRowCount(25, 2, 20)).toBe(5);
    expect(expectedRowCount(40, 3, 20)).toBe(0);
    expect(expectedRowCount(0, 1, 20)).toBe(0);
  });

  it('sequence gate accepts only the newest ticket', () => {
    const gate = new SequenceGate();
    const first = gate.issue();
    const second = gate.issue();
    expect(gate.isCurrent(first)).toBe(false);
    expect(gate.isCurrent(second)).toBe(true);
  });
});

describe('request validation mirrors the server', () => {
  it('accepts the defaults and rejects out-of-range paging', () => {
    const base = { conceptId: 'E449', subclasses: true, segments: [], page: 1, pageSize: 20 };
    expect(validSearchParams(base)).toBe(true);
    expect(validSearchParams({ ...base, page: 0 })).toBe(false);
    expect(validSearchParams({ ...base, pageSize: 0 })).toBe(false);
    expect(validSearchParams({ ...base, pageSize: 101 })).toBe(false);
    expect(validSearchParams({ ...base, conceptId: 'E01' })).toBe(false);
    expect(validSearchParams({ ...base, conceptId: 'x449' })).toBe(false);
  });

  it('rejects blank suggest queries and bad limits', () => {
    expect(validSuggestQuery('Cheb', 10)).toBe(true);
    expect(validSuggestQuery('   ', 10)).toBe(false);
    expect(validSuggestQuery('Cheb', 0)).toBe(false);
    expect(validSuggestQuery('Cheb', 51)).toBe(false);
  });

  it('refuses to issue a request the server would 400', async () => {
    const fetchMock = vi.fn();
    vi.stubGlobal('fetch', fetchMock);
    const api = new ApiClient('');
    await expect(
      api.search({ conceptId: 'bogus', subclasses: true, segments: [], page: 1, pageSize: 20 }),
    ).rejects.toThrow('invalid search parameters');
    expect(fetchMock).not.toHaveBeenCalled();
    vi.unstubAllGlobals();
  });
});

describe('debounce', () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it('collapses a burst into one trailing call', () => {
    const fn = vi.fn();
    const d = debounce(fn, 100);
    d(1);
    d(2);
    d(3);
    vi.advanceTimersByTime(99);
    expect(fn).not.toHaveBeenCalled();
    vi.advanceTimersByTime(1);
    expect(fn).toHaveBeenCalledTimes(1);
    expect(fn).toHaveBeenCalledWith(3);
  });

  it('cancel drops the pending call', () => {
    const fn = vi.fn();
    const d = debounce(fn, 100);
    d(1);
    d.cancel();
    vi.advanceTimersByTime(200);
    expect(fn).not.toHaveBeenCalled();
  });
});

describe('app flows', () => {
  let fetchMock: ReturnType<typeof vi.fn>;
  let app: App;

  function boot() {
    app = initApp(document, new ApiClient(''), { suggestWaitMs: 0 });
  }

  function input(): HTMLInputElement {
    return document.getElementById('query') as HTMLInputElement;
  }

  function requestedUrls(): string[] {
    return fetchMock.mock.calls.map((call) => String(call[0]));
  }

  beforeEach(() => {
    mountPage();
    fetchMock = vi.fn();
    vi.stubGlobal('fetch', fetchMock);
  });

  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it('issues no request for a single character', async () => {
    boot();
    type(input(), 'z');
    await new Promise((r) => setTimeout(r, 60));
    expect(fetchMock).not.toHaveBeenCalled();
    expect((document.getElementById('suggestions') as HTMLElement).hidden).toBe(true);
  });

  it('renders suggestions with a source badge', async () => {
    fetchMock.mockResolvedValue(jsonResponse(CHEB));
    boot();
    type(input(), 'Cheb');
    await waitFor(() => suggestionTexts().length > 0);
    expect(suggestionTexts()).toEqual(['Chebyshev iterative method']);
    expect(document.querySelector('#suggestions .badge')?.textContent).toBe('ontology');
    expect(requestedUrls()[0]).toContain('/api/suggest?q=Cheb&limit=10');
  });

  it('keeps the previous list and shows a banner when suggest fails', async () => {
    fetchMock.mockResolvedValueOnce(jsonResponse(CHEB));
    boot();
    type(input(), 'Cheb');
    await waitFor(() => suggestionTexts().length > 0);

    fetchMock.mockResolvedValueOnce(jsonResponse({ error: 'boom' }, 500));
    type(input(), 'Cheby');
    await waitFor(() => !(document.getElementById('banner') as HTMLElement).hidden);
    expect(suggestionTexts()).toEqual(['Chebyshev iterative method']);
  });

  it('drops a stale suggest response', async () => {
    const slow = deferred<Response>();
    const fast = deferred<Response>();
    fetchMock.mockReturnValueOnce(slow.promise).mockReturnValueOnce(fast.promise);
    boot();
    type(input(), 'Ch');
    await new Promise((r) => setTimeout(r, 10));
    type(input(), 'Cheb');
    await new Promise((r) => setTimeout(r, 10));
    fast.resolve(jsonResponse(CHEB));
    await waitFor(() => suggestionTexts().length > 0);
    slow.resolve(jsonResponse([{ display: 'stale', source: 'ONTOLOGY', conceptId: 'E1' }]));
    await new Promise((r) => setTimeout(r, 30));
    expect(suggestionTexts()).toEqual(['Chebyshev iterative method']);
  });

  it('click picks a suggestion and arms the search button', async () => {
    fetchMock.mockResolvedValue(jsonResponse(CHEB));
    boot();
    type(input(), 'Cheb');
    await waitFor(() => suggestionTexts().length > 0);
    document
      .querySelector('#suggestions li')!
      .dispatchEvent(new MouseEvent('mousedown', { bubbles: true }));
    expect(app.state.chosenSuggestion?.conceptId).toBe('E660');
    expect(input().value).toBe('Chebyshev iterative method');
    expect((document.getElementById('search') as HTMLButtonElement).disabled).toBe(false);
  });

  it('arrow keys plus enter pick a suggestion', async () => {
    fetchMock.mockResolvedValue(jsonResponse(CHEB));
    boot();
    type(input(), 'Cheb');
    await waitFor(() => suggestionTexts().length > 0);
    input().dispatchEvent(new KeyboardEvent('keydown', { key: 'ArrowDown', bubbles: true }));
    input().dispatchEvent(new KeyboardEvent('keydown', { key: 'Enter', bubbles: true }));
    expect(app.state.chosenSuggestion?.conceptId).toBe('E660');
  });

  async function bootWithChosen(conceptId = 'E449') {
    fetchMock.mockResolvedValueOnce(jsonResponse([
      { display: 'Method', source: 'ONTOLOGY', conceptId },
    ]));
    boot();
    type(input(), 'Meth');
    await waitFor(() => suggestionTexts().length > 0);
    document
      .querySelector('#suggestions li')!
      .dispatchEvent(new MouseEvent('mousedown', { bubbles: true }));
  }

  it('renders result rows with the spec columns', async () => {
    await bootWithChosen();
    fetchMock.mockResolvedValueOnce(
      jsonResponse(
        searchResponse([
          hit({ conceptId: 'E2690', symbol: 'u_h', formulaId: 'f3', articleId: 'a1' }),
          hit({ formulaId: 'f4', symbol: '\\tau_k', articleId: 'a2' }),
        ]),
      ),
    );
    (document.getElementById('search') as HTMLButtonElement).click();
    await waitFor(() => rows().length === 2);
    const url = requestedUrls()[1];
    expect(url).toContain('concept=E449');
    expect(url).toContain('subclasses=true');
    expect(url).not.toContain('segments=');
    const cells = Array.from(rows()[0].querySelectorAll('td')).map((td) => td.textContent);
    expect(cells.slice(0, 5)).toEqual(['E2690', 'u_h', 'x = y', 'theorem', 'a1']);
    expect(document.getElementById('status')?.textContent).toBe('2 occurrences, page 1');
  });

  it('shows the empty state and the 404 message', async () => {
    await bootWithChosen();
    fetchMock.mockResolvedValueOnce(jsonResponse(searchResponse([])));
    (document.getElementById('search') as HTMLButtonElement).click();
    await waitFor(() => document.getElementById('status')?.textContent === 'No occurrences found.');

    fetchMock.mockResolvedValueOnce(jsonResponse({ error: 'unknown class E449' }, 404));
    await app.runSearch(1);
    expect(document.getElementById('status')?.textContent).toBe('Concept not found.');
    expect(rows().length).toBe(0);
  });

  it('toggling a checkbox re-issues the query, empty selection restores the full set', async () => {
    await bootWithChosen();
    fetchMock.mockResolvedValue(jsonResponse(searchResponse([hit()])));
    (document.getElementById('search') as HTMLButtonElement).click();
    await waitFor(() => rows().length === 1);

    const boxes = Array.from(
      document.querySelectorAll<HTMLInputElement>('input[name="segment"]'),
    );
    for (const box of boxes) {
      if (box.value !== 'theorem') setCheckbox(box, false);
    }
    await waitFor(() => {
      const urls = requestedUrls();
      return urls[urls.length - 1].includes('segments=theorem');
    });

    setCheckbox(boxes.find((b) => b.value === 'theorem')!, false);
    await waitFor(() => {
      const urls = requestedUrls();
      return !urls[urls.length - 1].includes('segments=');
    });
  });

  it('no toggle fires before a first search ran', async () => {
    await bootWithChosen();
    const before = fetchMock.mock.calls.length;
    const box = document.querySelector<HTMLInputElement>('input[name="segment"]')!;
    setCheckbox(box, false);
    await new Promise((r) => setTimeout(r, 30));
    expect(fetchMock.mock.calls.length).toBe(before);
  });

  it('subclasses toggle is sent as a boolean parameter', async () => {
    await bootWithChosen();
    fetchMock.mockResolvedValue(jsonResponse(searchResponse([hit()])));
    (document.getElementById('search') as HTMLButtonElement).click();
    await waitFor(() => rows().length === 1);
    setCheckbox(document.getElementById('subclasses') as HTMLInputElement, false);
    await waitFor(() => {
      const urls = requestedUrls();
      return urls[urls.length - 1].includes('subclasses=false');
    });
  });

  it('pages 25 hits as 20 then 5 rows', async () => {
    await bootWithChosen();
    const pageOne = Array.from({ length: 20 }, (_, i) => hit({ formulaId: `f${i}` }));
    fetchMock.mockResolvedValueOnce(jsonResponse(searchResponse(pageOne, 25, 1)));
    (document.getElementById('search') as HTMLButtonElement).click();
    await waitFor(() => rows().length === 20);
    const next = document.getElementById('next') as HTMLButtonElement;
    expect(next.disabled).toBe(false);

    const pageTwo = Array.from({ length: 5 }, (_, i) => hit({ formulaId: `g${i}` }));
    fetchMock.mockResolvedValueOnce(jsonResponse(searchResponse(pageTwo, 25, 2)));
    next.click();
    await waitFor(() => rows().length === 5);
    expect(requestedUrls().pop()).toContain('page=2');
    expect(next.disabled).toBe(true);
    expect((document.getElementById('prev') as HTMLButtonElement).disabled).toBe(false);
  });

  it('drops a stale search response', async () => {
    await bootWithChosen();
    const slow = deferred<Response>();
    const fast = deferred<Response>();
    fetchMock.mockReturnValueOnce(slow.promise).mockReturnValueOnce(fast.promise);
    void app.runSearch(1);
    void app.runSearch(1);
    fast.resolve(jsonResponse(searchResponse([hit({ symbol: 'new' })])));
    await waitFor(() => rows().length === 1);
    slow.resolve(jsonResponse(searchResponse([hit({ symbol: 'old' }), hit({ symbol: 'old2' })])));
    await new Promise((r) => setTimeout(r, 30));
    expect(rows().length).toBe(1);
    expect(rows()[0].textContent).toContain('new');
  });

  it('details panel links every matched concept and omits a missing PDF', async () => {
    await bootWithChosen();
    fetchMock.mockResolvedValueOnce(
      jsonResponse({
        formulaId: 'f4',
        markup: 'A x = b',
        concepts: [
          { conceptId: 'E660', symbol: '\\tau_k' },
          { conceptId: 'E1891', symbol: 'A x = b' },
        ],
        segment: { segmentId: 's4', type: 'theorem', text: 'Main theorem.' },
        textOccurrences: [{ surface: 'Chebyshev iteration', conceptId: 'E660' }],
        article: { articleId: 'a2', title: 'On iterations', authors: ['Someone'], year: 2013 },
      }),
    );
    await app.openDetails('f4');
    const panel = document.getElementById('details') as HTMLElement;
    expect(panel.hidden).toBe(false);
    const hrefs = Array.from(panel.querySelectorAll('.concepts a')).map((a) =>
      a.getAttribute('href'),
    );
    expect(hrefs).toEqual(['/ontology/E660', '/ontology/E1891']);
    expect(panel.querySelector('.pdf')).toBeNull();
    expect(panel.textContent).toContain('Chebyshev iteration');
  });

  it('details 404 shows the gone message', async () => {
    await bootWithChosen();
    fetchMock.mockResolvedValueOnce(jsonResponse({ error: 'unknown formula f99' }, 404));
    await app.openDetails('f99');
    expect(document.getElementById('details')?.textContent).toBe('Formula no longer available.');
  });
});
