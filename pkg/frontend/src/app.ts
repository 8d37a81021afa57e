// Application wiring: query box, weight sliders, search/compare views,
// and rating submission. In-flight searches are aborted whenever a newer
// query or slider change fires (latest wins).

import { ApiClient, ApiError } from './api.js';
import { renderCompare, renderError, renderSearchResults } from './render.js';
import {
  FEATURE_KEYS,
  WEIGHT_MAX,
  WEIGHT_MIN,
  clampWeight,
  defaultWeights,
  serializeWeights,
  type WeightState,
} from './weights.js';

const RESULT_COUNT = 10;

export class App {
  readonly weights: WeightState = defaultWeights();

  private controller: AbortController | null = null;
  private view: 'search' | 'compare' = 'search';

  private form!: HTMLFormElement;
  private input!: HTMLInputElement;
  private validation!: HTMLElement;
  private output!: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  init(): void {
    this.root.replaceChildren();
    this.form = document.createElement('form');
    this.form.className = 'search-form';
    this.form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.refresh();
    });

    this.input = document.createElement('input');
    this.input.type = 'search';
    this.input.name = 'q';
    this.input.placeholder = 'search the web';
    this.input.dataset['role'] = 'query-input';
    this.form.appendChild(this.input);

    const go = document.createElement('button');
    go.type = 'submit';
    go.textContent = 'search';
    this.form.appendChild(go);

    const compareToggle = document.createElement('button');
    compareToggle.type = 'button';
    compareToggle.textContent = 'compare engines';
    compareToggle.dataset['role'] = 'compare-toggle';
    compareToggle.addEventListener('click', () => {
      this.view = this.view === 'search' ? 'compare' : 'search';
      compareToggle.classList.toggle('active', this.view === 'compare');
      void this.refresh();
    });
    this.form.appendChild(compareToggle);

    this.validation = document.createElement('span');
    this.validation.className = 'validation';
    this.validation.dataset['role'] = 'validation';
    this.form.appendChild(this.validation);

    this.root.appendChild(this.form);
    this.root.appendChild(this.buildSliderPanel());

    this.output = document.createElement('main');
    this.output.dataset['role'] = 'output';
    this.root.appendChild(this.output);
  }

  private buildSliderPanel(): HTMLElement {
    const panel = document.createElement('aside');
    panel.className = 'weight-panel';
    panel.dataset['role'] = 'weight-panel';
    for (const key of FEATURE_KEYS) {
      const row = document.createElement('label');
      row.className = 'weight-row';

      const name = document.createElement('span');
      name.textContent = key;
      row.appendChild(name);

      const slider = document.createElement('input');
      slider.type = 'range';
      slider.min = String(WEIGHT_MIN);
      slider.max = String(WEIGHT_MAX);
      slider.step = '0.1';
      slider.value = String(this.weights[key]);
      slider.dataset['weight'] = key;
      slider.addEventListener('input', () => {
        this.weights[key] = clampWeight(Number(slider.value));
        readout.textContent = this.weights[key].toFixed(1);
        void this.refresh(); // re-rank comes from the server, never locally
      });
      row.appendChild(slider);

      const readout = document.createElement('span');
      readout.className = 'weight-value';
      readout.textContent = this.weights[key].toFixed(1);
      row.appendChild(readout);

      panel.appendChild(row);
    }
    return panel;
  }

  setWeight(key: (typeof FEATURE_KEYS)[number], value: number): void {
    this.weights[key] = clampWeight(value);
    const slider = this.root.querySelector<HTMLInputElement>(`input[data-weight="${key}"]`);
    if (slider) slider.value = String(this.weights[key]);
  }

  /** Run the current view's request; superseded requests are aborted. */
  async refresh(): Promise<void> {
    const query = this.input.value.trim();
    if (!query) {
      this.validation.textContent = 'enter a query first';
      return; // inline validation only; no request goes out
    }
    this.validation.textContent = '';

    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;

    try {
      if (this.view === 'search') {
        const payload = await this.api.search(
          query,
          RESULT_COUNT,
          serializeWeights(this.weights),
          controller.signal,
        );
        if (controller !== this.controller) return; // a newer request won
        renderSearchResults(this.output, payload);
      } else {
        const payload = await this.api.compare(query, RESULT_COUNT, controller.signal);
        if (controller !== this.controller) return;
        renderCompare(this.output, payload, (system, score, done) => {
          this.api
            .feedback({ query, system, score })
            .then(() => done(true))
            .catch(() => done(false));
        });
      }
    } catch (error) {
      if (controller !== this.controller) return; // stale failure; ignore
      if ((error as Error).name === 'AbortError') return;
      const message =
        error instanceof ApiError ? error.message : 'request failed; is the service running?';
      renderError(this.output, message);
    }
  }
}

export function mount(root: HTMLElement, base = ''): App {
  const app = new App(root, new ApiClient(base));
  app.init();
  return app;
}
