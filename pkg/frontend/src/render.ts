import type { FormulaDetails, SearchResponse, Suggestion } from './api.js';

// All data lands in the DOM through textContent, never through innerHTML,
// so corpus markup and bilingual labels need no escaping here.

export function renderSuggestions(
  list: HTMLElement,
  items: Suggestion[],
  onPick: (item: Suggestion) => void,
): void {
  list.replaceChildren();
  for (const item of items) {
    const li = document.createElement('li');
    li.className = 'suggestion';
    const text = document.createElement('span');
    text.className = 'display';
    text.textContent = item.display;
    const badge = document.createElement('span');
    badge.className = 'badge';
    badge.textContent = item.source === 'ONTOLOGY' ? 'ontology' : 'external';
    li.append(text, badge);
    li.addEventListener('mousedown', (ev) => {
      ev.preventDefault(); // keep focus in the input
      onPick(item);
    });
    list.append(li);
  }
  list.hidden = items.length === 0;
}

export function markActiveSuggestion(list: HTMLElement, index: number): void {
  const items = Array.from(list.children);
  items.forEach((li, i) => li.classList.toggle('active', i === index));
}

export function renderResults(
  tbody: HTMLElement,
  status: HTMLElement,
  resp: SearchResponse,
  onDetails: (formulaId: string) => void,
): void {
  tbody.replaceChildren();
  if (resp.total === 0) {
    status.textContent = 'No occurrences found.';
    return;
  }
  status.textContent = `${resp.total} occurrence${resp.total === 1 ? '' : 's'}, page ${resp.page}`;
  for (const hit of resp.hits) {
    const tr = document.createElement('tr');
    tr.className = 'hit';
    for (const value of [hit.conceptId, hit.symbol]) {
      const td = document.createElement('td');
      td.textContent = value;
      tr.append(td);
    }
    const markup = document.createElement('td');
    const code = document.createElement('code');
    code.textContent = hit.markup;
    markup.append(code);
    tr.append(markup);
    for (const value of [hit.segmentType, hit.articleId]) {
      const td = document.createElement('td');
      td.textContent = value;
      tr.append(td);
    }
    const actions = document.createElement('td');
    const button = document.createElement('button');
    button.type = 'button';
    button.className = 'details';
    button.textContent = 'Details';
    button.addEventListener('click', () => onDetails(hit.formulaId));
    actions.append(button);
    tr.append(actions);
    tbody.append(tr);
  }
}

export function renderDetails(
  panel: HTMLElement,
  details: FormulaDetails,
  conceptUrl: (conceptId: string) => string,
): void {
  panel.replaceChildren();
  panel.hidden = false;

  const formula = document.createElement('pre');
  formula.className = 'formula';
  formula.textContent = details.markup;
  panel.append(formula);

  const concepts = document.createElement('ul');
  concepts.className = 'concepts';
  for (const c of details.concepts) {
    const li = document.createElement('li');
    const link = document.createElement('a');
    link.href = conceptUrl(c.conceptId);
    link.textContent = c.conceptId;
    li.append(link, ` (${c.symbol})`);
    concepts.append(li);
  }
  panel.append(concepts);

  const segment = document.createElement('p');
  segment.className = 'segment';
  segment.textContent = `${details.segment.type}: ${details.segment.text}`;
  panel.append(segment);

  if (details.textOccurrences.length) {
    const mentions = document.createElement('p');
    mentions.className = 'mentions';
    mentions.textContent =
      'Mentions: ' + details.textOccurrences.map((t) => t.surface).join(', ');
    panel.append(mentions);
  }

  const article = document.createElement('p');
  article.className = 'article';
  const a = details.article;
  article.textContent = `${a.title} (${a.authors.join(', ')}, ${a.year})`;
  if (a.metadataUrl) {
    const link = document.createElement('a');
    link.href = a.metadataUrl;
    link.textContent = 'metadata';
    article.append(' ', link);
  }
  if (a.pdfUrl) {
    const link = document.createElement('a');
    link.href = a.pdfUrl;
    link.className = 'pdf';
    link.textContent = 'PDF';
    article.append(' ', link);
  }
  panel.append(article);
}

export function showMessage(el: HTMLElement, message: string): void {
  el.textContent = message;
  el.hidden = false;
}

export function clearMessage(el: HTMLElement): void {
  el.textContent = '';
  el.hidden = true;
}
