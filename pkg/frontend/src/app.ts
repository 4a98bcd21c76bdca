import { ApiClient, HttpError, type SegmentType, type Suggestion, SEGMENT_TYPES } from './api.js';
import { debounce } from './debounce.js';
import {
  clearMessage,
  markActiveSuggestion,
  renderDetails,
  renderResults,
  renderSuggestions,
  showMessage,
} from './render.js';
import { SequenceGate, initialState, segmentsForRequest, type UiState } from './state.js';

export interface AppOptions {
  suggestWaitMs?: number;
  pageSize?: number;
}

export interface App {
  state: UiState;
  runSearch(page?: number): Promise<void>;
  openDetails(formulaId: string): Promise<void>;
}

function required<T extends HTMLElement>(doc: Document, id: string): T {
  const el = doc.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

export function initApp(doc: Document, api: ApiClient, options: AppOptions = {}): App {
  const pageSize = options.pageSize ?? 20;
  const state = initialState();

  const queryInput = required<HTMLInputElement>(doc, 'query');
  const suggestionList = required<HTMLUListElement>(doc, 'suggestions');
  const banner = required<HTMLElement>(doc, 'banner');
  const subclassesBox = required<HTMLInputElement>(doc, 'subclasses');
  const searchButton = required<HTMLButtonElement>(doc, 'search');
  const resultsBody = required<HTMLElement>(doc, 'results');
  const statusLine = required<HTMLElement>(doc, 'status');
  const prevButton = required<HTMLButtonElement>(doc, 'prev');
  const nextButton = required<HTMLButtonElement>(doc, 'next');
  const detailsPanel = required<HTMLElement>(doc, 'details');
  const segmentBoxes = Array.from(
    doc.querySelectorAll<HTMLInputElement>('input[name="segment"]'),
  );

  const suggestGate = new SequenceGate();
  const searchGate = new SequenceGate();
  const detailsGate = new SequenceGate();

  let shown: Suggestion[] = [];
  let activeIndex = -1;

  subclassesBox.checked = state.subclassesToggle;
  for (const box of segmentBoxes) {
    const type = box.value as SegmentType;
    box.checked = state.segmentChecks[type];
  }
  searchButton.disabled = true;
  prevButton.disabled = true;
  nextButton.disabled = true;

  function pick(item: Suggestion) {
    state.chosenSuggestion = item;
    state.queryText = item.display;
    queryInput.value = item.display;
    hideSuggestions();
    searchButton.disabled = !item.conceptId;
  }

  function hideSuggestions() {
    suggestionList.replaceChildren();
    suggestionList.hidden = true;
    activeIndex = -1;
  }

  async function fetchSuggestions(q: string) {
    const ticket = suggestGate.issue();
    try {
      const items = await api.suggest(q);
      if (!suggestGate.isCurrent(ticket)) return;
      clearMessage(banner);
      shown = items;
      activeIndex = -1;
      renderSuggestions(suggestionList, items, pick);
    } catch (err) {
      if (!suggestGate.isCurrent(ticket)) return;
      // non-blocking: previous list stays up
      showMessage(banner, `Suggestions unavailable: ${(err as Error).message}`);
    }
  }

  const debouncedSuggest = debounce(fetchSuggestions, options.suggestWaitMs ?? 200);

  queryInput.addEventListener('input', () => {
    state.queryText = queryInput.value;
    state.chosenSuggestion = undefined;
    searchButton.disabled = true;
    const q = state.queryText.trim();
    if (q.length < 2) {
      debouncedSuggest.cancel();
      hideSuggestions();
      return;
    }
    debouncedSuggest(q);
  });

  queryInput.addEventListener('keydown', (ev) => {
    if (suggestionList.hidden || !shown.length) return;
    if (ev.key === 'ArrowDown') {
      ev.preventDefault();
      activeIndex = (activeIndex + 1) % shown.length;
      markActiveSuggestion(suggestionList, activeIndex);
    } else if (ev.key === 'ArrowUp') {
      ev.preventDefault();
      activeIndex = (activeIndex - 1 + shown.length) % shown.length;
      markActiveSuggestion(suggestionList, activeIndex);
    } else if (ev.key === 'Enter' && activeIndex >= 0) {
      ev.preventDefault();
      pick(shown[activeIndex]);
    } else if (ev.key === 'Escape') {
      hideSuggestions();
    }
  });

  async function runSearch(page = 1): Promise<void> {
    const conceptId = state.chosenSuggestion?.conceptId;
    if (!conceptId) return;
    const ticket = searchGate.issue();
    try {
      const resp = await api.search({
        conceptId,
        subclasses: state.subclassesToggle,
        segments: segmentsForRequest(state.segmentChecks),
        page,
        pageSize,
      });
      if (!searchGate.isCurrent(ticket)) return;
      clearMessage(banner);
      state.results = resp;
      state.currentPage = resp.page;
      renderResults(resultsBody, statusLine, resp, openDetails);
      prevButton.disabled = resp.page <= 1;
      nextButton.disabled = resp.page * resp.pageSize >= resp.total;
    } catch (err) {
      if (!searchGate.isCurrent(ticket)) return;
      if (err instanceof HttpError && err.status === 404) {
        resultsBody.replaceChildren();
        statusLine.textContent = 'Concept not found.';
      } else {
        showMessage(banner, `Search failed: ${(err as Error).message}`);
      }
    }
  }

  async function openDetails(formulaId: string): Promise<void> {
    const ticket = detailsGate.issue();
    try {
      const details = await api.formulaDetails(formulaId);
      if (!detailsGate.isCurrent(ticket)) return;
      clearMessage(banner);
      state.detailsOpen = formulaId;
      renderDetails(detailsPanel, details, (id) => api.conceptUrl(id));
    } catch (err) {
      if (!detailsGate.isCurrent(ticket)) return;
      if (err instanceof HttpError && err.status === 404) {
        state.detailsOpen = undefined;
        detailsPanel.replaceChildren();
        showMessage(detailsPanel, 'Formula no longer available.');
      } else {
        showMessage(banner, `Details failed: ${(err as Error).message}`);
      }
    }
  }

  searchButton.addEventListener('click', () => void runSearch(1));
  prevButton.addEventListener('click', () => void runSearch(state.currentPage - 1));
  nextButton.addEventListener('click', () => void runSearch(state.currentPage + 1));

  subclassesBox.addEventListener('change', () => {
    state.subclassesToggle = subclassesBox.checked;
    if (state.results) void runSearch(1);
  });
  for (const box of segmentBoxes) {
    box.addEventListener('change', () => {
      state.segmentChecks[box.value as SegmentType] = box.checked;
      if (state.results) void runSearch(1);
    });
  }

  // belt and braces: the markup should list every type exactly once
  const listed = new Set(segmentBoxes.map((b) => b.value));
  for (const t of SEGMENT_TYPES) {
    if (!listed.has(t)) throw new Error(`segment checkbox for ${t} missing`);
  }

  return { state, runSearch, openDetails };
}
