/** Typed loaders for the recorded API fixtures. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type {
  DocumentPage,
  LexiconSummary,
  LexiconView,
  NgramResponse,
  RankResponse,
  RecommendResponse,
  SearchResponse,
  SubCorpusView,
} from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

export const fixtures = {
  recommend: () => loadFixture<RecommendResponse>("recommend.json"),
  lexiconCreated: () => loadFixture<LexiconView>("lexicon_created.json"),
  lexiconAfterDecisions: () =>
    loadFixture<LexiconView>("lexicon_after_decisions.json"),
  lexiconsList: () => loadFixture<LexiconSummary[]>("lexicons_list.json"),
  rank: () => loadFixture<RankResponse>("rank.json"),
  subcorpus: () => loadFixture<SubCorpusView>("subcorpus.json"),
  subcorpusAfterExclude: () =>
    loadFixture<SubCorpusView>("subcorpus_after_exclude.json"),
  search: () => loadFixture<SearchResponse>("search_fever.json"),
  ngramsFever: () => loadFixture<NgramResponse>("ngrams_fever.json"),
  ngramsScarletFever: () =>
    loadFixture<NgramResponse>("ngrams_scarlet_fever.json"),
  ngramsAbsent: () => loadFixture<NgramResponse>("ngrams_absent.json"),
  documentTopRanked: () => loadFixture<DocumentPage>("document_top_ranked.json"),
  versionConflict: () =>
    loadFixture<{ status: number; body: { code: string; message: string; details: Record<string, unknown> } }>(
      "error_version_conflict.json",
    ),
};
