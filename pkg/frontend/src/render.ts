// DOM rendering. Results are laid out strictly in payload order; nothing
// here sorts, filters, or recomputes scores.

import type { ComparePayload, RawHit, ResultPayload, SearchPayload } from './types.js';
import { FEATURE_KEYS } from './weights.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function featureBars(features: Record<string, number>): HTMLElement {
  const wrap = el('div', 'feature-bars');
  for (const key of FEATURE_KEYS) {
    const value = features[key] ?? 0;
    const row = el('div', 'feature-bar');
    row.dataset['feature'] = key;
    row.appendChild(el('span', 'feature-name', key));
    const track = el('span', 'bar-track');
    const fill = el('span', 'bar-fill');
    fill.style.width = `${Math.round(value * 100)}%`;
    track.appendChild(fill);
    row.appendChild(track);
    row.appendChild(el('span', 'feature-value', value.toFixed(2)));
    wrap.appendChild(row);
  }
  return wrap;
}

function resultCard(result: ResultPayload): HTMLElement {
  const card = el('article', 'result');
  card.dataset['url'] = result.url;
  card.dataset['position'] = String(result.position);

  const head = el('div', 'result-head');
  head.appendChild(el('span', 'position', String(result.position)));
  const link = el('a', 'result-title', result.title || result.url);
  link.href = result.url;
  head.appendChild(link);
  head.appendChild(el('span', 'score', result.score.toFixed(3)));
  card.appendChild(head);

  card.appendChild(el('div', 'result-url', result.url));
  if (result.snippet) card.appendChild(el('p', 'snippet', result.snippet));

  const badges = el('div', 'badges');
  for (const source of result.sources) {
    badges.appendChild(el('span', 'badge', `${source.engine} #${source.rank}`));
  }
  card.appendChild(badges);
  card.appendChild(featureBars(result.features));
  return card;
}

export function renderDegradedBanner(container: HTMLElement, failed: string[]): void {
  const banner = el(
    'div',
    'banner degraded',
    failed.length
      ? `Some engines failed (${failed.join(', ')}); results are partial.`
      : 'Some engines failed; results are partial.',
  );
  banner.dataset['role'] = 'degraded-banner';
  container.appendChild(banner);
}

export function renderError(container: HTMLElement, message: string): void {
  container.replaceChildren();
  const panel = el('div', 'banner error', message);
  panel.dataset['role'] = 'error-panel';
  container.appendChild(panel);
}

export function renderSearchResults(container: HTMLElement, payload: SearchPayload): void {
  container.replaceChildren();
  if (payload.degraded) renderDegradedBanner(container, payload.failed_engines);

  const expansionTerms = Object.values(payload.expansions).flat();
  if (expansionTerms.length) {
    container.appendChild(
      el('div', 'expansions', `also matching: ${expansionTerms.join(', ')}`),
    );
  }

  if (!payload.results.length) {
    container.appendChild(el('p', 'empty', 'No results for this query.'));
    return;
  }
  const list = el('div', 'results');
  list.dataset['role'] = 'result-list';
  for (const result of payload.results) {
    list.appendChild(resultCard(result)); // payload order; never re-sorted
  }
  container.appendChild(list);
}

function rawColumn(engine: string, hits: RawHit[]): HTMLElement {
  const column = el('section', 'column');
  column.dataset['system'] = engine;
  column.appendChild(el('h3', 'column-title', engine));
  if (!hits.length) {
    column.appendChild(el('p', 'empty', 'No results from this engine.'));
  }
  const list = el('ol', 'raw-list');
  for (const hit of hits) {
    const item = el('li', 'raw-hit');
    item.dataset['url'] = hit.url;
    const link = el('a', 'raw-title', hit.title || hit.url);
    link.href = hit.url;
    item.appendChild(link);
    item.appendChild(el('div', 'result-url', hit.url));
    list.appendChild(item);
  }
  column.appendChild(list);
  return column;
}

export interface RatingHandler {
  (system: string, score: number, done: (ok: boolean) => void): void;
}

function ratingWidget(system: string, onRate: RatingHandler): HTMLElement {
  const widget = el('div', 'rating');
  widget.dataset['role'] = 'rating-widget';
  widget.dataset['system'] = system;
  widget.appendChild(el('span', 'rating-label', 'rate 1-5:'));

  let chosen = 0;
  const buttons: HTMLButtonElement[] = [];
  for (let score = 1; score <= 5; score += 1) {
    const button = el('button', 'rating-score', String(score));
    button.type = 'button';
    button.dataset['score'] = String(score);
    button.addEventListener('click', () => {
      chosen = score;
      buttons.forEach((b) => b.classList.toggle('selected', b === button));
      submit.disabled = false;
    });
    buttons.push(button);
    widget.appendChild(button);
  }

  const submit = el('button', 'rating-submit', 'submit');
  submit.type = 'button';
  submit.disabled = true; // no score chosen yet
  const status = el('span', 'rating-status', '');
  submit.addEventListener('click', () => {
    if (!chosen) return;
    submit.disabled = true;
    status.textContent = 'sending...';
    onRate(system, chosen, (ok) => {
      if (ok) {
        status.textContent = 'thanks!';
        status.classList.add('confirmed');
      } else {
        status.textContent = 'failed - retry?';
        submit.disabled = false; // chosen score is kept for the retry
      }
    });
  });
  widget.appendChild(submit);
  widget.appendChild(status);
  return widget;
}

export function renderCompare(
  container: HTMLElement,
  payload: ComparePayload,
  onRate: RatingHandler,
): void {
  container.replaceChildren();
  if (payload.degraded) renderDegradedBanner(container, []);

  const grid = el('div', 'compare-grid');
  for (const engine of Object.keys(payload.engines)) {
    const column = rawColumn(engine, payload.engines[engine] ?? []);
    column.appendChild(ratingWidget(engine, onRate));
    grid.appendChild(column);
  }

  const merged = el('section', 'column merged');
  merged.dataset['system'] = payload.merged_system;
  merged.appendChild(el('h3', 'column-title', payload.merged_system));
  if (!payload.merged.length) {
    merged.appendChild(el('p', 'empty', 'No merged results.'));
  }
  const list = el('div', 'results');
  for (const result of payload.merged) {
    list.appendChild(resultCard(result));
  }
  merged.appendChild(list);
  merged.appendChild(ratingWidget(payload.merged_system, onRate));
  grid.appendChild(merged);

  container.appendChild(grid);
}
