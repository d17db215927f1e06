// State for the phase-1 rating form: five 1..5 attributes plus two
// search-engine flags. Submission stays disabled until all five are set.

import { RatingsPayload } from './api.js';

export const RATING_ATTRIBUTES = [
  'relevance',
  'readability',
  'ambiguity',
  'convergence',
  'familiarity',
] as const;

export type RatingAttribute = (typeof RATING_ATTRIBUTES)[number];

export interface RatingFormState {
  ratings: Partial<Record<RatingAttribute, number>>;
  googleFound: boolean;
  bingFound: boolean;
  // Keyboard-first entry: digits 1..5 rate the focused attribute and move on.
  focusedAttribute: number;
}

export function createRatingForm(): RatingFormState {
  return { ratings: {}, googleFound: false, bingFound: false, focusedAttribute: 0 };
}

export function setRating(form: RatingFormState, attribute: RatingAttribute, value: number): void {
  if (!Number.isInteger(value) || value < 1 || value > 5) {
    throw new RangeError(`rating must be an integer in 1..5, got ${value}`);
  }
  form.ratings[attribute] = value;
}

export function setFlag(form: RatingFormState, engine: 'google' | 'bing', found: boolean): void {
  if (engine === 'google') {
    form.googleFound = found;
  } else {
    form.bingFound = found;
  }
}

export function focusAttribute(form: RatingFormState, index: number): void {
  form.focusedAttribute = Math.min(Math.max(index, 0), RATING_ATTRIBUTES.length - 1);
}

// Returns true when the key was consumed (a digit 1..5 on a focusable attribute).
export function applyDigitKey(form: RatingFormState, key: string): boolean {
  if (!/^[1-5]$/.test(key)) {
    return false;
  }
  const attribute = RATING_ATTRIBUTES[form.focusedAttribute];
  if (attribute === undefined) {
    return false;
  }
  setRating(form, attribute, Number(key));
  if (form.focusedAttribute < RATING_ATTRIBUTES.length - 1) {
    form.focusedAttribute++;
  }
  return true;
}

export function missingAttributes(form: RatingFormState): RatingAttribute[] {
  return RATING_ATTRIBUTES.filter((name) => form.ratings[name] === undefined);
}

export function isComplete(form: RatingFormState): boolean {
  return missingAttributes(form).length === 0;
}

export function toPayload(form: RatingFormState): RatingsPayload {
  const missing = missingAttributes(form);
  if (missing.length > 0) {
    throw new Error(`ratings incomplete: ${missing.join(', ')} not set`);
  }
  return {
    relevance: form.ratings.relevance!,
    readability: form.ratings.readability!,
    ambiguity: form.ratings.ambiguity!,
    convergence: form.ratings.convergence!,
    familiarity: form.ratings.familiarity!,
    google_found: form.googleFound,
    bing_found: form.bingFound,
  };
}
