/** Thin typed client for the /api endpoints. No business logic here: every
 * function returns the server payload untouched. */

import type {
  ApiErrorBody,
  DecisionsPayload,
  DocumentPage,
  LexiconSummary,
  LexiconView,
  NgramResponse,
  RankResponse,
  RecommendResponse,
  SearchResponse,
  SubCorpusView,
} from "./types.js";

export class ApiError extends Error {
  code: string;
  status: number;
  details: Record<string, unknown>;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.details = body.details ?? {};
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    const body = (await response.json().catch(() => ({
      code: `HTTP_${response.status}`,
      message: response.statusText,
      details: {},
    }))) as ApiErrorBody;
    throw new ApiError(response.status, body);
  }
  return (await response.json()) as T;
}

function query(params: Record<string, string | number | null | undefined>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== null && value !== undefined && value !== "") {
      search.set(key, String(value));
    }
  }
  const text = search.toString();
  return text ? `?${text}` : "";
}

export const api = {
  health: () => request<{ status: string }>("/api/health"),

  config: () => request<Record<string, unknown>>("/api/config"),

  search: (q: string, filters: Record<string, string | number | null> = {}) =>
    request<SearchResponse>(`/api/search${query({ q, ...filters })}`),

  ngrams: (term: string, yearFrom: number, yearTo: number) =>
    request<NgramResponse>(
      `/api/ngrams${query({ term, year_from: yearFrom, year_to: yearTo })}`,
    ),

  document: (docId: string, page = 1, pageSize = 500) =>
    request<DocumentPage>(
      `/api/documents/${encodeURIComponent(docId)}${query({ page, page_size: pageSize })}`,
    ),

  listLexicons: () => request<LexiconSummary[]>("/api/lexicons"),

  getLexicon: (name: string) =>
    request<LexiconView>(`/api/lexicons/${encodeURIComponent(name)}`),

  createLexicon: (name: string, seeds: string[]) =>
    request<LexiconView>("/api/lexicons", {
      method: "POST",
      body: JSON.stringify({ name, seeds }),
    }),

  recommend: (name: string, k = 20) =>
    request<RecommendResponse>(
      `/api/lexicons/${encodeURIComponent(name)}/recommend`,
      { method: "POST", body: JSON.stringify({ k }) },
    ),

  submitDecisions: (name: string, payload: DecisionsPayload) =>
    request<LexiconView>(`/api/lexicons/${encodeURIComponent(name)}/decisions`, {
      method: "POST",
      body: JSON.stringify(payload),
    }),

  rank: (name: string, limit = 100) =>
    request<RankResponse>(`/api/lexicons/${encodeURIComponent(name)}/rank`, {
      method: "POST",
      body: JSON.stringify({ limit }),
    }),

  listSubcorpora: () => request<SubCorpusView[]>("/api/subcorpora"),

  getSubcorpus: (name: string) =>
    request<SubCorpusView>(`/api/subcorpora/${encodeURIComponent(name)}`),

  createSubcorpus: (name: string, lexiconName: string, limit = 100) =>
    request<SubCorpusView>("/api/subcorpora", {
      method: "POST",
      body: JSON.stringify({ name, lexicon_name: lexiconName, limit }),
    }),

  excludeDocument: (name: string, version: number, docId: string) =>
    request<SubCorpusView>(
      `/api/subcorpora/${encodeURIComponent(name)}/exclude`,
      { method: "POST", body: JSON.stringify({ version, doc_id: docId }) },
    ),

  includeDocument: (name: string, version: number, docId: string) =>
    request<SubCorpusView>(
      `/api/subcorpora/${encodeURIComponent(name)}/include`,
      { method: "POST", body: JSON.stringify({ version, doc_id: docId }) },
    ),

  exportUrl: (name: string) =>
    `/api/subcorpora/${encodeURIComponent(name)}/export`,
};
