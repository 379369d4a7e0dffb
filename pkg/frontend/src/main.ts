/** App wiring: hash routing and the DOM layer over the pure view-models. */

import { api, ApiError } from "./api.js";
import {
  buildDecisionsPayload,
  candidateRows,
  canSubmit,
  chipGroups,
  historyEntries,
  initWorkbench,
  interpretFailure,
  setMark,
  withCandidates,
  type Mark,
  type WorkbenchState,
} from "./workbench.js";
import {
  effectiveMembers,
  initCuration,
  planExportFlow,
  resultRows,
  toggleExcluded,
  type CurationState,
} from "./curation.js";
import {
  chartScale,
  formatValue,
  polylinePoints,
  toChartSeries,
  type ChartSeries,
  type SeriesMode,
} from "./ngrams.js";
import { markTokens } from "./highlight.js";
import { clear, el, svgEl } from "./dom.js";
import type { LexiconView } from "./types.js";

const root = () => document.getElementById("app") as HTMLElement;

function banner(kind: "error" | "info", message: string, onReload?: () => void) {
  return el(
    "div",
    { class: `banner banner-${kind}` },
    message,
    onReload
      ? el("button", { class: "link", onclick: () => onReload() }, "Reload")
      : null,
  );
}

function nav(): HTMLElement {
  return el(
    "nav",
    {},
    el("a", { href: "#/" }, "Lexicons"),
    el("a", { href: "#/search" }, "Search"),
    el("a", { href: "#/ngrams" }, "N-grams"),
  );
}

function page(...children: (Node | string | null)[]): void {
  const host = root();
  clear(host);
  host.append(nav(), ...children.filter((c): c is Node | string => c !== null));
}

function fail(error: unknown): void {
  const message =
    error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
  page(banner("error", message));
}

// ------------------------------- home screen -------------------------------

async function showHome(): Promise<void> {
  const lexicons = await api.listLexicons();
  const nameInput = el("input", { placeholder: "lexicon name" });
  const seedsInput = el("input", {
    placeholder: "seed terms, comma-separated",
    class: "wide",
  });
  const message = el("div", {});

  const create = async () => {
    try {
      const seeds = seedsInput.value.split(",").map((s) => s.trim()).filter(Boolean);
      const lexicon = await api.createLexicon(nameInput.value.trim(), seeds);
      location.hash = `#/lexicon/${encodeURIComponent(lexicon.name)}`;
    } catch (error) {
      clear(message);
      message.append(banner("error", interpretFailure(error).message));
    }
  };

  page(
    el("h1", {}, "Thematic lexicons"),
    el(
      "table",
      { class: "list" },
      el(
        "thead",
        {},
        el("tr", {}, el("th", {}, "name"), el("th", {}, "accepted"),
           el("th", {}, "rejected"), el("th", {}, "rounds"), el("th", {}, "")),
      ),
      el(
        "tbody",
        {},
        ...lexicons.map((summary) =>
          el(
            "tr",
            {},
            el("td", {}, el("a", {
              href: `#/lexicon/${encodeURIComponent(summary.name)}`,
            }, summary.name)),
            el("td", {}, String(summary.accepted_count)),
            el("td", {}, String(summary.rejected_count)),
            el("td", {}, String(summary.round_count)),
            el("td", {}, el("a", {
              href: `#/curate/${encodeURIComponent(summary.name)}`,
            }, "rank →")),
          ),
        ),
      ),
    ),
    el("h2", {}, "New lexicon"),
    el("div", { class: "row" }, nameInput, seedsInput,
       el("button", { onclick: () => void create() }, "Create")),
    message,
  );
}

// ----------------------------- lexicon workbench ---------------------------

async function showWorkbench(name: string): Promise<void> {
  const lexicon = await api.getLexicon(name);
  const state = initWorkbench(lexicon);
  renderWorkbench(state);
}

function renderWorkbench(state: WorkbenchState, notice?: Node): void {
  const lexicon = state.lexicon;
  const chips = chipGroups(lexicon);
  const chipList = (label: string, terms: string[], kind: string) =>
    el(
      "div",
      { class: "chip-row" },
      el("span", { class: "chip-label" }, label),
      ...terms.map((t) => el("span", { class: `chip chip-${kind}` }, t)),
    );

  const rows = candidateRows(state);
  const submitLabel = `Submit decisions (${state.marks.size})`;

  const recommendButton = el("button", {
    onclick: () => void doRecommend(state),
  }, "Recommend");

  const submitButton = el(
    "button",
    { onclick: () => void doSubmit(state) },
    submitLabel,
  ) as HTMLButtonElement;
  submitButton.disabled = !canSubmit(state);

  const markCell = (term: string, mark: Mark, current: Mark) => {
    const button = el("button", {
      class: `mark mark-${mark}${current === mark ? " active" : ""}`,
      onclick: () => {
        setMark(state, term, current === mark ? "skip" : mark);
        renderWorkbench(state);
      },
    }, mark);
    return button;
  };

  page(
    el("h1", {}, `Lexicon: ${lexicon.name}`),
    notice ?? null,
    chipList("seeds", chips.seeds, "seed"),
    chipList("accepted", chips.accepted, "accept"),
    chipList("rejected", chips.rejected, "reject"),
    el("div", { class: "row" },
       recommendButton,
       el("a", { href: `#/curate/${encodeURIComponent(lexicon.name)}` },
          "Rank documents →")),
    rows.length === 0
      ? el("p", { class: "muted" },
           "No open round. Recommend to fetch candidates.")
      : el(
          "table",
          { class: "list" },
          el("thead", {}, el("tr", {},
            el("th", {}, "candidate"), el("th", {}, "score"),
            el("th", {}, "decision"))),
          el("tbody", {}, ...rows.map((row) =>
            el("tr", { class: row.mark !== "skip" ? `row-${row.mark}` : "" },
              el("td", {}, row.term),
              el("td", {}, row.score.toFixed(4)),
              el("td", {},
                markCell(row.term, "accept", row.mark),
                markCell(row.term, "reject", row.mark)),
            ),
          )),
        ),
    submitButton,
    el("h2", {}, "Round history"),
    el(
      "table",
      { class: "list" },
      el("thead", {}, el("tr", {},
        el("th", {}, "round"), el("th", {}, "when"), el("th", {}, "query"),
        el("th", {}, "offered"), el("th", {}, "accepted"),
        el("th", {}, "rejected"))),
      el("tbody", {}, ...historyEntries(lexicon).map((entry) =>
        el("tr", {},
          el("td", {}, String(entry.round)),
          el("td", {}, entry.timestamp),
          el("td", {}, entry.queryTerms.join(", ")),
          el("td", {}, String(entry.offered)),
          el("td", {}, entry.acceptedNow.join(", ") || "–"),
          el("td", {}, entry.rejectedNow.join(", ") || "–"),
        ),
      )),
    ),
  );
}

async function doRecommend(state: WorkbenchState): Promise<void> {
  try {
    const response = await api.recommend(state.lexicon.name);
    renderWorkbench(withCandidates(state, response.candidates, response.version));
  } catch (error) {
    const failure = interpretFailure(error);
    renderWorkbench(state, banner("error", failure.message));
  }
}

async function doSubmit(state: WorkbenchState): Promise<void> {
  try {
    const updated = await api.submitDecisions(
      state.lexicon.name, buildDecisionsPayload(state),
    );
    renderWorkbench(initWorkbench(updated));
  } catch (error) {
    const failure = interpretFailure(error);
    if (failure.kind === "reload-prompt") {
      renderWorkbench(state, banner("error", failure.message, () => {
        void showWorkbench(state.lexicon.name);
      }));
    } else {
      renderWorkbench(state, banner("error", failure.message));
    }
  }
}

// --------------------------- results and curation ---------------------------

async function showCuration(lexiconName: string): Promise<void> {
  const response = await api.rank(lexiconName);
  renderCuration(initCuration(lexiconName, response.results));
}

function renderCuration(state: CurationState, notice?: Node): void {
  const rows = resultRows(state);
  const saveInput = el("input", {
    placeholder: "sub-corpus name",
  }) as HTMLInputElement;
  if (state.subcorpus) saveInput.value = state.subcorpus.name;

  const save = async () => {
    try {
      const view = await api.createSubcorpus(
        saveInput.value.trim(), state.lexiconName,
      );
      const next = { ...state, subcorpus: view };
      renderCuration(next, banner("info", `Saved as ${view.name}.`));
    } catch (error) {
      renderCuration(state, banner("error", interpretFailure(error).message));
    }
  };

  const runExport = async () => {
    try {
      if (!state.subcorpus) throw new Error("save the ranking first");
      let version = state.subcorpus.version;
      let view = state.subcorpus;
      for (const step of planExportFlow(state)) {
        if (step.kind === "exclude") {
          view = await api.excludeDocument(view.name, version, step.docId);
          version = view.version;
        } else if (step.kind === "include") {
          view = await api.includeDocument(view.name, version, step.docId);
          version = view.version;
        } else {
          window.location.assign(step.url);
        }
      }
      renderCuration({ ...state, subcorpus: view },
                     banner("info", "Export started."));
    } catch (error) {
      renderCuration(state, banner("error", interpretFailure(error).message));
    }
  };

  page(
    el("h1", {}, `Ranked documents: ${state.lexiconName}`),
    notice ?? null,
    el("p", { class: "muted" },
       `${effectiveMembers(state).length} of ${state.ranking.length} kept`),
    el(
      "table",
      { class: "list" },
      el("thead", {}, el("tr", {},
        el("th", {}, "#"), el("th", {}, "title"), el("th", {}, "author"),
        el("th", {}, "year"), el("th", {}, "score"), el("th", {}, "keep"))),
      el("tbody", {}, ...rows.map((row) =>
        el("tr", { class: row.excluded ? "row-excluded" : "" },
          el("td", {}, String(row.rank)),
          el("td", {}, el("a", {
            href: `#/doc/${encodeURIComponent(row.doc_id)}?lexicon=${encodeURIComponent(state.lexiconName)}`,
          }, row.title)),
          el("td", {}, row.author),
          el("td", {}, row.year === null ? "–" : String(row.year)),
          el("td", {}, row.score.toFixed(6)),
          el("td", {}, el("button", {
            class: "mark",
            onclick: () => { toggleExcluded(state, row.doc_id); renderCuration(state); },
          }, row.excluded ? "include" : "exclude")),
        ),
      )),
    ),
    el("div", { class: "row" },
       saveInput,
       el("button", { onclick: () => void save() }, "Save as sub-corpus"),
       el("button", { onclick: () => void runExport() }, "Export archive")),
  );
}

// -------------------------------- close reading -----------------------------

async function showDocument(docId: string, lexiconName: string | null): Promise<void> {
  const doc = await api.document(docId, 1, 5000);
  let lexicon: LexiconView | null = null;
  if (lexiconName) lexicon = await api.getLexicon(lexiconName);
  const marks = markTokens(doc.tokens, lexicon ? lexicon.accepted : []);
  const body = el("p", { class: "reading" });
  for (const mark of marks) {
    body.append(
      mark.highlighted
        ? el("mark", { title: mark.term ?? "" }, mark.token)
        : mark.token,
      " ",
    );
  }
  page(
    el("h1", {}, doc.title),
    el("p", { class: "muted" },
       `${doc.author} · ${doc.year ?? "year unknown"} · ${doc.category} · ` +
       `${doc.length} tokens` +
       (lexicon ? ` · highlighting ${lexicon.accepted.length} terms` : "")),
    body,
  );
}

// -------------------------------- search screen -----------------------------

async function showSearch(params: URLSearchParams): Promise<void> {
  const q = params.get("q") ?? "";
  const input = el("input", { class: "wide", placeholder: "keywords…" }) as HTMLInputElement;
  input.value = q;
  const yearFrom = el("input", { placeholder: "year from", class: "narrow" }) as HTMLInputElement;
  yearFrom.value = params.get("year_from") ?? "";
  const yearTo = el("input", { placeholder: "year to", class: "narrow" }) as HTMLInputElement;
  yearTo.value = params.get("year_to") ?? "";

  const go = () => {
    const next = new URLSearchParams();
    if (input.value.trim()) next.set("q", input.value.trim());
    if (yearFrom.value) next.set("year_from", yearFrom.value);
    if (yearTo.value) next.set("year_to", yearTo.value);
    location.hash = `#/search?${next.toString()}`;
  };

  const pieces: (Node | string | null)[] = [
    el("h1", {}, "Keyword search"),
    el("div", { class: "row" }, input, yearFrom, yearTo,
       el("button", { onclick: go }, "Search")),
  ];

  if (q) {
    try {
      const response = await api.search(q, {
        year_from: params.get("year_from"),
        year_to: params.get("year_to"),
        limit: 25,
      });
      pieces.push(
        el("p", { class: "muted" },
           `tokens: ${response.query_tokens.join(", ")}`),
        ...response.results.map((result) =>
          el("div", { class: "hit" },
            el("a", {
              href: `#/doc/${encodeURIComponent(result.doc_id)}`,
              class: "hit-title",
            }, `${result.title} (${result.year ?? "?"})`),
            el("span", { class: "muted" },
               ` ${result.author} · score ${result.score.toFixed(6)}`),
            el("p", {}, `…${result.snippet}…`),
          ),
        ),
      );
      if (response.results.length === 0) {
        pieces.push(el("p", { class: "muted" }, "No matches."));
      }
    } catch (error) {
      pieces.push(banner("error", interpretFailure(error).message));
    }
  }
  page(...pieces);
}

// -------------------------------- ngram screen ------------------------------

interface NgramScreenState {
  terms: string[];
  yearFrom: number;
  yearTo: number;
  mode: SeriesMode;
}

async function showNgrams(params: URLSearchParams): Promise<void> {
  const state: NgramScreenState = {
    terms: (params.get("terms") ?? "").split(",").map((t) => t.trim()).filter(Boolean),
    yearFrom: Number(params.get("from") ?? 1840),
    yearTo: Number(params.get("to") ?? 1900),
    mode: (params.get("mode") as SeriesMode) || "relative",
  };

  const input = el("input", {
    class: "wide", placeholder: "terms, comma-separated (bigrams allowed)",
  }) as HTMLInputElement;
  input.value = state.terms.join(", ");

  const navigate = (mode: SeriesMode) => {
    const next = new URLSearchParams();
    next.set("terms", input.value);
    next.set("from", String(state.yearFrom));
    next.set("to", String(state.yearTo));
    next.set("mode", mode);
    location.hash = `#/ngrams?${next.toString()}`;
  };

  const pieces: (Node | string | null)[] = [
    el("h1", {}, "N-gram frequencies"),
    el("div", { class: "row" },
       input,
       el("button", { onclick: () => navigate(state.mode) }, "Plot"),
       el("button", { class: state.mode === "relative" ? "active" : "" ,
                      onclick: () => navigate("relative") }, "relative"),
       el("button", { class: state.mode === "count" ? "active" : "",
                      onclick: () => navigate("count") }, "count")),
  ];

  if (state.terms.length > 0) {
    try {
      const responses = await Promise.all(
        state.terms.map((t) => api.ngrams(t, state.yearFrom, state.yearTo)),
      );
      const series: ChartSeries[] = responses.map((r, i) =>
        toChartSeries(r, state.mode, i));
      const geometry = { width: 760, height: 320, padding: 40 };
      const scale = chartScale(series, geometry);
      if (scale) {
        const svg = svgEl("svg", {
          viewBox: `0 0 ${geometry.width} ${geometry.height}`,
          class: "chart",
        });
        svg.append(
          svgEl("line", {
            x1: String(geometry.padding), y1: String(geometry.height - geometry.padding),
            x2: String(geometry.width - geometry.padding),
            y2: String(geometry.height - geometry.padding), class: "axis",
          }),
          svgEl("line", {
            x1: String(geometry.padding), y1: String(geometry.padding),
            x2: String(geometry.padding),
            y2: String(geometry.height - geometry.padding), class: "axis",
          }),
          svgEl("text", {
            x: String(geometry.padding), y: String(geometry.height - 12),
            class: "axis-label",
          }, String(scale.yearMin)),
          svgEl("text", {
            x: String(geometry.width - geometry.padding),
            y: String(geometry.height - 12), class: "axis-label",
            "text-anchor": "end",
          }, String(scale.yearMax)),
          svgEl("text", {
            x: String(geometry.padding), y: String(geometry.padding - 8),
            class: "axis-label",
          }, formatValue(scale.valueMax, state.mode)),
        );
        for (const s of series) {
          svg.append(svgEl("polyline", {
            points: polylinePoints(s, scale),
            fill: "none", stroke: s.color, "stroke-width": "2",
          }));
        }
        pieces.push(
          svg,
          el("div", { class: "row" }, ...series.map((s) =>
            el("span", { class: "legend" },
               el("span", { class: "swatch", style: `background:${s.color}` }, ""),
               s.term),
          )),
        );
      } else {
        pieces.push(el("p", { class: "muted" }, "No populated years in range."));
      }
    } catch (error) {
      pieces.push(banner("error", interpretFailure(error).message));
    }
  }
  page(...pieces);
}

// ---------------------------------- router ----------------------------------

async function route(): Promise<void> {
  const hash = location.hash || "#/";
  const [path, rawQuery] = hash.slice(1).split("?");
  const params = new URLSearchParams(rawQuery ?? "");
  const parts = path.split("/").filter(Boolean);
  try {
    if (parts.length === 0) return await showHome();
    if (parts[0] === "search") return await showSearch(params);
    if (parts[0] === "ngrams") return await showNgrams(params);
    if (parts[0] === "lexicon" && parts[1]) {
      return await showWorkbench(decodeURIComponent(parts[1]));
    }
    if (parts[0] === "curate" && parts[1]) {
      return await showCuration(decodeURIComponent(parts[1]));
    }
    if (parts[0] === "doc" && parts[1]) {
      return await showDocument(decodeURIComponent(parts[1]), params.get("lexicon"));
    }
    return await showHome();
  } catch (error) {
    fail(error);
  }
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());
