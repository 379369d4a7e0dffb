/** Close-reading term highlighting: mark every occurrence of a lexicon's
 * accepted terms (unigrams and two-token phrases) in a token stream. */

export interface TokenMark {
  token: string;
  highlighted: boolean;
  /** The matched lexicon term, when highlighted. */
  term: string | null;
}

export function markTokens(tokens: string[], terms: string[]): TokenMark[] {
  const unigrams = new Set(terms.filter((t) => !t.includes(" ")));
  const bigrams = new Map<string, string>();
  for (const term of terms) {
    const parts = term.split(" ");
    if (parts.length === 2) bigrams.set(`${parts[0]} ${parts[1]}`, term);
  }

  const marks: TokenMark[] = tokens.map((token) => ({
    token,
    highlighted: false,
    term: null,
  }));
  for (let i = 0; i < tokens.length; i++) {
    if (i + 1 < tokens.length) {
      const pair = `${tokens[i]} ${tokens[i + 1]}`;
      const term = bigrams.get(pair);
      if (term !== undefined) {
        marks[i] = { token: tokens[i], highlighted: true, term };
        marks[i + 1] = { token: tokens[i + 1], highlighted: true, term };
      }
    }
    if (!marks[i].highlighted && unigrams.has(tokens[i])) {
      marks[i] = { token: tokens[i], highlighted: true, term: tokens[i] };
    }
  }
  return marks;
}

/** Occurrences per matched term (bigram occurrences count once, not per
 * token), comparable with the matched_terms map from the ranking API. */
export function countOccurrences(
  tokens: string[],
  terms: string[],
): Record<string, number> {
  const counts: Record<string, number> = {};
  for (const term of terms) {
    const parts = term.split(" ");
    let n = 0;
    if (parts.length === 1) {
      for (const token of tokens) if (token === term) n++;
    } else if (parts.length === 2) {
      for (let i = 0; i + 1 < tokens.length; i++) {
        if (tokens[i] === parts[0] && tokens[i + 1] === parts[1]) n++;
      }
    }
    if (n > 0) counts[term] = n;
  }
  return counts;
}
