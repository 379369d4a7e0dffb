/** Lexicon workbench view-model: the candidate checklist for the open
 * round, the decisions payload builder, and the 409 reload prompt.
 *
 * Pure data in, pure data out; the DOM layer only paints what these
 * functions return, so every displayed number comes verbatim from an API
 * payload. */

import type {
  Candidate,
  DecisionsPayload,
  LexiconView,
} from "./types.js";
import { ApiError } from "./api.js";

export type Mark = "accept" | "reject" | "skip";

export interface WorkbenchState {
  lexicon: LexiconView;
  /** Candidates of the open round, in API (non-increasing score) order. */
  candidates: Candidate[];
  /** Version token every mutation must carry. */
  version: number;
  marks: Map<string, Mark>;
}

export function initWorkbench(lexicon: LexiconView): WorkbenchState {
  return {
    lexicon,
    candidates: lexicon.pending ? [...lexicon.pending.candidates] : [],
    version: lexicon.version,
    marks: new Map(),
  };
}

export function withCandidates(
  state: WorkbenchState,
  candidates: Candidate[],
  version: number,
): WorkbenchState {
  return { ...state, candidates: [...candidates], version, marks: new Map() };
}

export function setMark(state: WorkbenchState, term: string, mark: Mark): void {
  if (!state.candidates.some((c) => c.term === term)) {
    throw new Error(`term ${term} is not among the offered candidates`);
  }
  if (mark === "skip") {
    state.marks.delete(term);
  } else {
    state.marks.set(term, mark);
  }
}

export interface CandidateRow {
  term: string;
  score: number;
  mark: Mark;
}

/** Rows for the checklist, preserving the API's score order. */
export function candidateRows(state: WorkbenchState): CandidateRow[] {
  return state.candidates.map((c) => ({
    term: c.term,
    score: c.score,
    mark: state.marks.get(c.term) ?? "skip",
  }));
}

/** Submit stays disabled until at least one candidate is marked. */
export function canSubmit(state: WorkbenchState): boolean {
  return state.marks.size > 0;
}

/** Exactly the user's marked terms plus the version token, nothing else. */
export function buildDecisionsPayload(state: WorkbenchState): DecisionsPayload {
  const accept: string[] = [];
  const reject: string[] = [];
  for (const candidate of state.candidates) {
    const mark = state.marks.get(candidate.term);
    if (mark === "accept") accept.push(candidate.term);
    else if (mark === "reject") reject.push(candidate.term);
  }
  return { version: state.version, accept, reject };
}

export interface ChipGroups {
  seeds: string[];
  accepted: string[];
  rejected: string[];
}

/** Seed/accepted/rejected chips; accepted excludes seeds to avoid showing a
 * term twice. */
export function chipGroups(lexicon: LexiconView): ChipGroups {
  const seedSet = new Set(lexicon.seeds);
  return {
    seeds: [...lexicon.seeds],
    accepted: lexicon.accepted.filter((t) => !seedSet.has(t)),
    rejected: [...lexicon.rejected],
  };
}

export interface HistoryEntry {
  round: number;
  timestamp: string;
  queryTerms: string[];
  offered: number;
  acceptedNow: string[];
  rejectedNow: string[];
}

export function historyEntries(lexicon: LexiconView): HistoryEntry[] {
  return lexicon.rounds.map((r, i) => ({
    round: i + 1,
    timestamp: r.timestamp,
    queryTerms: [...r.query_terms],
    offered: r.candidates.length,
    acceptedNow: [...r.accepted_now],
    rejectedNow: [...r.rejected_now],
  }));
}

export type UiFailure =
  | { kind: "reload-prompt"; message: string }
  | { kind: "inline"; message: string };

/** Map a failed mutation onto what the screen should do: stale version means
 * a visible reload prompt, anything else an inline message. */
export function interpretFailure(error: unknown): UiFailure {
  if (error instanceof ApiError) {
    if (error.code === "VERSION_CONFLICT") {
      return {
        kind: "reload-prompt",
        message:
          "This lexicon changed elsewhere (version " +
          `${String(error.details["current_version"] ?? "?")}). Reload to continue.`,
      };
    }
    if (error.code === "OOV_TERM") {
      const missing = (error.details["missing"] as string[] | undefined) ?? [];
      return {
        kind: "inline",
        message: `Not in the model vocabulary: ${missing.join(", ")}`,
      };
    }
    return { kind: "inline", message: `${error.code}: ${error.message}` };
  }
  return { kind: "inline", message: String(error) };
}
