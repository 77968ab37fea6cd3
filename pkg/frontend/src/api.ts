// Thin typed client over fetch. The base URL defaults to same-origin
// (the service mounts the UI under /ui/); set globalThis.SKETCHLET_API_BASE
// before loading the app to point elsewhere.

import type {
  ApiErrorBody, CorpusInfo, DiffRequest, DiffResponse, FreqRequest,
  FreqResponse, KeywordsRequest, KeywordsResponse, KrcRequest, KrcResponse,
  SearchRequest, SearchResponse, SketchRequest, SketchResponse,
  SubcorporaResponse, WordlistRequest, WordlistResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly body: ApiErrorBody, readonly status: number) {
    super(body.message);
    this.name = "ApiError";
  }
}

export function apiBase(): string {
  const g = globalThis as { SKETCHLET_API_BASE?: string };
  return g.SKETCHLET_API_BASE ?? "";
}

async function parseError(resp: Response): Promise<never> {
  let body: ApiErrorBody;
  try {
    body = (await resp.json()) as ApiErrorBody;
  } catch {
    body = { code: "HttpError", message: `HTTP ${resp.status}` };
  }
  throw new ApiError(body, resp.status);
}

async function get<T>(path: string): Promise<T> {
  const resp = await fetch(apiBase() + path);
  if (!resp.ok) await parseError(resp);
  return (await resp.json()) as T;
}

async function post<T>(path: string, body: unknown): Promise<T> {
  const resp = await fetch(apiBase() + path, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!resp.ok) await parseError(resp);
  return (await resp.json()) as T;
}

export const api = {
  corpus: () => get<CorpusInfo>("/api/corpus"),
  subcorpora: () => get<SubcorporaResponse>("/api/subcorpora"),
  search: (req: SearchRequest) => post<SearchResponse>("/api/search", req),
  freq: (req: FreqRequest) => post<FreqResponse>("/api/freq", req),
  sketch: (req: SketchRequest) => post<SketchResponse>("/api/sketch", req),
  sketchdiff: (req: DiffRequest) => post<DiffResponse>("/api/sketchdiff", req),
  krcs: (req: KrcRequest) => post<KrcResponse>("/api/krcs", req),
  wordlist: (req: WordlistRequest) =>
    post<WordlistResponse>("/api/wordlist", req),
  keywords: (req: KeywordsRequest) =>
    post<KeywordsResponse>("/api/keywords", req),
};
