import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

const here = dirname(fileURLToPath(import.meta.url));

/** Mount the real page markup so tests and index.html cannot drift apart.
 * The bootstrap script tag is dropped; tests call initApp themselves. */
export function mountPage(): void {
  const html = readFileSync(join(here, '..', 'index.html'), 'utf-8');
  const body = html.match(/<body>([\s\S]*)<\/body>/);
  if (!body) throw new Error('index.html has no body');
  document.body.innerHTML = body[1].replace(/<script[\s\S]*?<\/script>/g, '');
}

export async function waitFor(check: () => boolean, timeoutMs = 5000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!check()) {
    if (Date.now() > deadline) throw new Error('waitFor timed out');
    await new Promise((r) => setTimeout(r, 25));
  }
}

export function type(input: HTMLInputElement, text: string): void {
  input.value = text;
  input.dispatchEvent(new Event('input', { bubbles: true }));
}

export function setCheckbox(box: HTMLInputElement, checked: boolean): void {
  box.checked = checked;
  box.dispatchEvent(new Event('change', { bubbles: true }));
}

export function rows(): HTMLElement[] {
  return Array.from(document.querySelectorAll('#results tr'));
}

export function suggestionTexts(): string[] {
  return Array.from(document.querySelectorAll('#suggestions .display')).map(
    (el) => el.textContent ?? '',
  );
}
