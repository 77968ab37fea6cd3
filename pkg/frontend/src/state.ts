// Form state and its mapping onto API requests. Pure functions, so the
// contract tests can pin the exact wire shapes.

import type {
  PageSpec, QueryKind, SearchRequest, TextTypeFilter,
} from "./types.js";

export const DEFAULT_CONTEXT_WINDOW = 15;
export const DEFAULT_PAGE_LIMIT = 20;

export interface QueryFormState {
  kind: QueryKind;
  text: string;
  /** facet attribute -> selected values, in UI order; year is separate */
  facets: Record<string, string[]>;
  yearRange: [number, number] | null;
  contextLemma: string;
  contextWindow: number;
  subcorpus: string | null;
  offset: number;
  limit: number;
}

export function initialState(): QueryFormState {
  return {
    kind: "simple",
    text: "",
    facets: {},
    yearRange: null,
    contextLemma: "",
    contextWindow: DEFAULT_CONTEXT_WINDOW,
    subcorpus: null,
    offset: 0,
    limit: DEFAULT_PAGE_LIMIT,
  };
}

/** Submit needs exactly one query text: the selected kind, non-empty. */
export function canSubmit(state: QueryFormState): boolean {
  return state.text.trim().length > 0;
}

/**
 * Selections to the filter object the API expects, losslessly: one key
 * per attribute with selected values, plus year_range. Returns undefined
 * when nothing is selected so the request omits the key entirely.
 */
export function facetsToFilter(
  facets: Record<string, string[]>,
  yearRange: [number, number] | null,
): TextTypeFilter | undefined {
  const filter: TextTypeFilter = {};
  let any = false;
  for (const attr of Object.keys(facets)) {
    const values = facets[attr];
    if (values && values.length > 0) {
      filter[attr] = [...values];
      any = true;
    }
  }
  if (yearRange) {
    filter["year_range"] = [yearRange[0], yearRange[1]];
    any = true;
  }
  return any ? filter : undefined;
}

export function buildSearchRequest(state: QueryFormState): SearchRequest {
  const req: SearchRequest = {
    query: { [state.kind]: state.text.trim() },
    page: { offset: state.offset, limit: state.limit },
  };
  const filter = facetsToFilter(state.facets, state.yearRange);
  if (filter) req.filter = filter;
  if (state.subcorpus) req.subcorpus = state.subcorpus;
  const lemma = state.contextLemma.trim();
  if (lemma) req.context = { lemma, window: state.contextWindow };
  return req;
}

// --- pagination ------------------------------------------------------------

export function canPrev(page: PageSpec): boolean {
  return page.offset > 0;
}

export function canNext(page: PageSpec, total: number): boolean {
  return page.offset + page.limit < total;
}

export function prevOffset(page: PageSpec): number {
  return Math.max(0, page.offset - page.limit);
}

/** Next page start, never beyond the last existing match. */
export function nextOffset(page: PageSpec, total: number): number {
  const next = page.offset + page.limit;
  return next < total ? next : page.offset;
}

/** Clamp a stored offset after the result set changed size. */
export function clampOffset(offset: number, total: number, limit: number): number {
  if (total <= 0 || offset <= 0) return 0;
  const lastPage = Math.floor((total - 1) / limit) * limit;
  return Math.min(offset, lastPage);
}

// --- stale-response bookkeeping ---------------------------------------------

export interface RequestGate {
  /** Mark a new request; returns its ticket. */
  next(): number;
  /** Does the ticket still belong to the newest request? */
  isCurrent(ticket: number): boolean;
}

/** One gate per view: responses to superseded requests are dropped. */
export function makeGate(): RequestGate {
  let seq = 0;
  return {
    next: () => ++seq,
    isCurrent: (ticket: number) => ticket === seq,
  };
}
