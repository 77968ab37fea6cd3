// Wire types for the corpus service JSON API. Field names mirror the
// server exactly; every number shown in the UI comes from one of these.

export interface SubcorpusInfo {
  name: string;
  token_size: number;
  documents: number;
}

export interface CorpusInfo {
  documents: number;
  sentences: number;
  tokens: number;
  distinct_lemmas: number;
  text_types: Record<string, Array<string | number>>;
  texttype_sizes: Record<string, Record<string, number>>;
  subcorpora: SubcorpusInfo[];
}

export type QueryKind =
  | "cql" | "lemma" | "word" | "phrase" | "simple" | "character";

export const QUERY_KINDS: readonly QueryKind[] =
  ["simple", "lemma", "phrase", "word", "character", "cql"];

export type QuerySpec = Partial<Record<QueryKind, string>>;

/** Attribute name to accepted values; year_range is [lo, hi] inclusive. */
export interface TextTypeFilter {
  [attr: string]: string[] | [number, number];
}

export interface ContextSpec {
  lemma: string;
  window?: number;
}

export interface PageSpec {
  offset: number;
  limit: number;
}

export interface SearchRequest {
  query: QuerySpec;
  filter?: TextTypeFilter;
  subcorpus?: string;
  context?: ContextSpec;
  page?: PageSpec;
  window?: number;
}

export interface KwicLine {
  doc_id: string;
  left: string[];
  node: string[];
  right: string[];
  start: number;
  end: number;
  meta: Record<string, string | number>;
}

export interface SearchResponse {
  total: number;
  offset: number;
  limit: number;
  lines: KwicLine[];
}

export interface FreqRequest {
  query: QuerySpec;
  group_by: string;
  filter?: TextTypeFilter;
  subcorpus?: string;
}

export interface FreqRow {
  key: string;
  freq: number;
  rel: number | null;
}

export interface FreqResponse {
  total: number;
  rows: FreqRow[];
}

export interface SketchRequest {
  lemma: string;
  form?: string;
  min_freq?: number;
  max_rows?: number;
  filter?: TextTypeFilter;
  subcorpus?: string;
}

export interface SketchRow {
  collocate: string;
  freq: number;
  score: number;
}

export interface SketchRelation {
  name: string;
  display: string;
  total: number;
  rows: SketchRow[];
}

export interface SketchResponse {
  headword: string;
  scope: string;
  overall_total: number;
  relations: SketchRelation[];
}

export type DiffMode = "two-lemmas" | "two-subcorpora" | "two-wordforms";
export type DiffClass = "a_only" | "b_only" | "shared";

export interface DiffRequest {
  mode: DiffMode;
  lemma?: string;
  lemma_a?: string;
  lemma_b?: string;
  subcorpus_a?: string;
  subcorpus_b?: string;
  form_a?: string;
  form_b?: string;
  min_freq?: number;
  filter?: TextTypeFilter;
  subcorpus?: string;
}

export interface DiffRow {
  collocate: string;
  freq_a: number;
  freq_b: number;
  score_a: number | null;
  score_b: number | null;
  class: DiffClass;
}

export interface DiffRelation {
  name: string;
  display: string;
  rows: DiffRow[];
}

export interface DiffResponse {
  mode: string;
  side_a: string;
  side_b: string;
  relations: DiffRelation[];
}

export interface KrcRequest {
  lemma: string;
  relation?: string;
  collocate?: string;
  filter?: TextTypeFilter;
  subcorpus?: string;
}

export interface Krc {
  relation: string;
  doc_id: string;
  sentence: string;
  headword_offset: number;
  collocate_offset: number;
}

export interface KrcResponse {
  krcs: Krc[];
}

export interface WordlistRequest {
  attr?: string;
  regex?: string;
  ngram?: number;
  pos_filter?: string;
  min_freq?: number;
  filter?: TextTypeFilter;
  subcorpus?: string;
}

export interface WordlistResponse {
  total: number;
  rows: Array<{ key: string; freq: number }>;
}

export interface ScopeSpec {
  filter?: TextTypeFilter;
  subcorpus?: string;
}

export interface KeywordsRequest {
  focus: ScopeSpec;
  ref: ScopeSpec;
  attr?: string;
  smooth?: number;
}

export interface KeywordRow {
  key: string;
  freq_focus: number;
  freq_ref: number;
  fpm_focus: number;
  fpm_ref: number;
  score: number;
}

export interface KeywordsResponse {
  rows: KeywordRow[];
}

export interface SubcorporaResponse {
  subcorpora: Array<SubcorpusInfo & { filter: TextTypeFilter | null }>;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  position?: number;
}
