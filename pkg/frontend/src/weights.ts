// Slider state for the nine ranking parameters. Sliders move in [0, 2]
// around the server default of 1.0 (0 mutes a parameter, 2 doubles it).

export const FEATURE_KEYS = [
  'title',
  'description',
  'keyword',
  'snippet',
  'freshness',
  'charset',
  'image_alt',
  'sitemap',
  'links',
] as const;

export type FeatureKey = (typeof FEATURE_KEYS)[number];
export type WeightState = Record<FeatureKey, number>;

export const WEIGHT_MIN = 0;
export const WEIGHT_MAX = 2;
export const WEIGHT_DEFAULT = 1;

export function defaultWeights(): WeightState {
  const state = {} as WeightState;
  for (const key of FEATURE_KEYS) {
    state[key] = WEIGHT_DEFAULT;
  }
  return state;
}

export function clampWeight(value: number): number {
  if (Number.isNaN(value)) return WEIGHT_DEFAULT;
  return Math.min(WEIGHT_MAX, Math.max(WEIGHT_MIN, value));
}

/** Weights override for the API, or null when everything is at default
 * (so the request can omit the parameter entirely). */
export function serializeWeights(state: WeightState): string | null {
  const overrides: Partial<Record<FeatureKey, number>> = {};
  for (const key of FEATURE_KEYS) {
    if (state[key] !== WEIGHT_DEFAULT) {
      overrides[key] = state[key];
    }
  }
  if (Object.keys(overrides).length === 0) return null;
  return JSON.stringify(overrides);
}
