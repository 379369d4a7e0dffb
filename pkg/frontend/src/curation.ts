/** Results-and-curation view-model: the ranked table, local exclusion
 * toggles, and the request plan that syncs exclusions before an export. */

import type { RankedDoc, SubCorpusView } from "./types.js";

export interface CurationState {
  lexiconName: string;
  ranking: RankedDoc[];
  /** Locally toggled exclusions, by doc_id. */
  excluded: Set<string>;
  /** Set once the ranking has been saved server-side. */
  subcorpus: SubCorpusView | null;
}

export function initCuration(lexiconName: string, ranking: RankedDoc[]): CurationState {
  return { lexiconName, ranking: [...ranking], excluded: new Set(), subcorpus: null };
}

export function fromSubcorpus(view: SubCorpusView): CurationState {
  const ranking: RankedDoc[] = view.members.map((m) => ({
    doc_id: m.doc_id,
    title: m.title,
    author: m.author,
    year: m.year,
    category: m.category,
    score: m.score,
    matched_terms: {},
  }));
  const state = initCuration(view.lexicon_name, ranking);
  state.subcorpus = view;
  for (const docId of view.excluded) state.excluded.add(docId);
  return state;
}

export function toggleExcluded(state: CurationState, docId: string): void {
  if (!state.ranking.some((r) => r.doc_id === docId)) {
    throw new Error(`document ${docId} is not in the ranking`);
  }
  if (state.excluded.has(docId)) state.excluded.delete(docId);
  else state.excluded.add(docId);
}

export interface ResultRow extends RankedDoc {
  rank: number;
  excluded: boolean;
}

/** Table rows in API order: title, author, year, score, with the exclusion
 * toggle state. */
export function resultRows(state: CurationState): ResultRow[] {
  return state.ranking.map((doc, i) => ({
    ...doc,
    rank: i + 1,
    excluded: state.excluded.has(doc.doc_id),
  }));
}

export function effectiveMembers(state: CurationState): RankedDoc[] {
  return state.ranking.filter((doc) => !state.excluded.has(doc.doc_id));
}

export type PlannedRequest =
  | { kind: "exclude"; docId: string }
  | { kind: "include"; docId: string }
  | { kind: "export"; url: string };

/** The ordered requests needed to make the server match the local excluded
 * set and then download the archive. Excluded rows appear only as exclude
 * calls, never in the export itself. */
export function planExportFlow(state: CurationState): PlannedRequest[] {
  if (state.subcorpus === null) {
    throw new Error("save the ranking as a sub-corpus before exporting");
  }
  const server = new Set(state.subcorpus.excluded);
  const plan: PlannedRequest[] = [];
  for (const doc of state.ranking) {
    const local = state.excluded.has(doc.doc_id);
    const remote = server.has(doc.doc_id);
    if (local && !remote) plan.push({ kind: "exclude", docId: doc.doc_id });
    else if (!local && remote) plan.push({ kind: "include", docId: doc.doc_id });
  }
  plan.push({
    kind: "export",
    url: `/api/subcorpora/${encodeURIComponent(state.subcorpus.name)}/export`,
  });
  return plan;
}
