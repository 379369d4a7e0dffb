/** Payload shapes mirrored from the /api endpoints. */

export interface Candidate {
  term: string;
  score: number;
}

export interface ExpansionRound {
  query_terms: string[];
  candidates: Candidate[];
  accepted_now: string[];
  rejected_now: string[];
  timestamp: string;
}

export interface PendingRound {
  query_terms: string[];
  candidates: Candidate[];
  opened_at: string;
}

export interface LexiconView {
  name: string;
  model_ref: string;
  seeds: string[];
  accepted: string[];
  rejected: string[];
  rounds: ExpansionRound[];
  pending: PendingRound | null;
  version: number;
}

export interface LexiconSummary {
  name: string;
  model_ref: string;
  seeds: string[];
  accepted_count: number;
  rejected_count: number;
  round_count: number;
  version: number;
}

export interface RecommendResponse {
  candidates: Candidate[];
  version: number;
}

export interface DocMeta {
  doc_id: string;
  title: string;
  author: string;
  year: number | null;
  category: string;
}

export interface RankedDoc extends DocMeta {
  score: number;
  matched_terms: Record<string, number>;
}

export interface RankResponse {
  lexicon_name: string;
  results: RankedDoc[];
}

export interface SearchResult extends DocMeta {
  score: number;
  snippet: string;
}

export interface SearchResponse {
  query_tokens: string[];
  results: SearchResult[];
}

export interface NgramPoint {
  year: number;
  count: number;
  relative_frequency: number;
}

export interface NgramResponse {
  term: string;
  points: NgramPoint[];
}

export interface SubCorpusMember extends DocMeta {
  rank: number;
  score: number;
  matched_term_count: number;
}

export interface SubCorpusView {
  name: string;
  lexicon_name: string;
  created_at: string;
  filters: {
    year_from: number | null;
    year_to: number | null;
    category: string | null;
    author: string | null;
  };
  excluded: string[];
  members: SubCorpusMember[];
  total_ranked: number;
  version: number;
}

export interface DocumentPage extends DocMeta {
  length: number;
  page: number;
  page_size: number;
  total_pages: number;
  tokens: string[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export interface DecisionsPayload {
  version: number;
  accept: string[];
  reject: string[];
}
