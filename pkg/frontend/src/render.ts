// HTML renderers. All pure string -> string so they run identically in
// the browser and under the test runner; app.ts only assigns innerHTML.

import type {
  ApiErrorBody, CorpusInfo, DiffClass, DiffResponse, FreqResponse, Krc,
  KeywordRow, KwicLine, SearchResponse, SketchResponse, WordlistResponse,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Scores and Rel % are shown with two decimals; frequencies as-is. */
export function fmtScore(value: number | null): string {
  return value === null ? "--" : value.toFixed(2);
}

/** Diff row colors: side A green, side B red, shared uncolored. */
export const DIFF_COLORS: Record<DiffClass, string> = {
  a_only: "green",
  b_only: "red",
  shared: "white",
};

function metaTooltip(meta: Record<string, string | number>): string {
  return Object.keys(meta).sort()
    .map((k) => `${k}: ${meta[k]}`)
    .join("\n");
}

// --- concordance -------------------------------------------------------------

export function renderKwicRow(line: KwicLine): string {
  // node emphasis is by weight, not color
  return `<tr class="kwic-row" title="${escapeHtml(metaTooltip(line.meta))}">` +
    `<td class="doc">${escapeHtml(line.doc_id)}</td>` +
    `<td class="left">${escapeHtml(line.left.join(" "))}</td>` +
    `<td class="node"><strong>${escapeHtml(line.node.join(" "))}</strong></td>` +
    `<td class="right">${escapeHtml(line.right.join(" "))}</td></tr>`;
}

export function renderConcordance(resp: SearchResponse): string {
  if (resp.total === 0) {
    return `<p class="empty">No matches.</p>`;
  }
  const from = resp.offset + 1;
  const to = Math.min(resp.offset + resp.lines.length, resp.total);
  const rows = resp.lines.map(renderKwicRow).join("");
  return `<p class="summary">` +
    `<span class="total-badge">${resp.total}</span> matches, ` +
    `showing ${from}–${to}</p>` +
    `<table class="kwic"><tbody>${rows}</tbody></table>`;
}

// --- frequency ---------------------------------------------------------------

export function renderFreq(resp: FreqResponse, heading: string): string {
  const hasRel = resp.rows.some((r) => r.rel !== null);
  const head = `<tr><th>${escapeHtml(heading)}</th><th>freq</th>` +
    (hasRel ? "<th>Rel %</th>" : "") + "</tr>";
  const rows = resp.rows.map((r) =>
    `<tr><td>${escapeHtml(r.key)}</td><td class="num">${r.freq}</td>` +
    (hasRel ? `<td class="num">${fmtScore(r.rel)}</td>` : "") + "</tr>",
  ).join("");
  return `<p class="summary">total <span class="total-badge">${resp.total}</span></p>` +
    `<table class="freq">${head}${rows}</table>`;
}

// --- word sketch ---------------------------------------------------------------

export function displayHeading(template: string, headword: string): string {
  return template.split("%w").join(headword);
}

export function renderSketch(resp: SketchResponse): string {
  const cols = resp.relations.filter((rel) => rel.rows.length > 0);
  if (cols.length === 0) {
    return `<p class="empty">No sketch rows for ` +
      `<strong>${escapeHtml(resp.headword)}</strong>. The corpus has no ` +
      `relation matches with this headword; try another lemma or a wider ` +
      `scope.</p>`;
  }
  const columns = cols.map((rel) => {
    const rows = rel.rows.map((r) =>
      `<tr class="sketch-row" data-relation="${escapeHtml(rel.name)}"` +
      ` data-collocate="${escapeHtml(r.collocate)}">` +
      `<td class="collocate">${escapeHtml(r.collocate)}</td>` +
      `<td class="num">${r.freq}</td>` +
      `<td class="num">${fmtScore(r.score)}</td></tr>`,
    ).join("");
    return `<div class="sketch-col">` +
      `<h3>${escapeHtml(displayHeading(rel.display, resp.headword))}</h3>` +
      `<table><tr><th></th><th>freq</th><th>score</th></tr>${rows}</table>` +
      `</div>`;
  }).join("");
  return `<p class="summary">${escapeHtml(resp.headword)} · ` +
    `${escapeHtml(resp.scope)} · ` +
    `<span class="total-badge">${resp.overall_total}</span> headword hits; ` +
    `click a row for its contexts</p>` +
    `<div class="sketch">${columns}</div>`;
}

// --- sketch diff ---------------------------------------------------------------

export function renderDiff(resp: DiffResponse): string {
  const rels = resp.relations.filter((rel) => rel.rows.length > 0);
  if (rels.length === 0) {
    return `<p class="empty">No rows to compare.</p>`;
  }
  const blocks = rels.map((rel) => {
    const rows = rel.rows.map((r) =>
      `<tr class="diff-row ${r.class}">` +
      `<td class="collocate">${escapeHtml(r.collocate)}</td>` +
      `<td class="num">${r.freq_a}</td><td class="num">${r.freq_b}</td>` +
      `<td class="num">${fmtScore(r.score_a)}</td>` +
      `<td class="num">${fmtScore(r.score_b)}</td></tr>`,
    ).join("");
    return `<div class="diff-rel"><h3>${escapeHtml(rel.name)}</h3>` +
      `<table><tr><th></th><th>freq A</th><th>freq B</th>` +
      `<th>score A</th><th>score B</th></tr>${rows}</table></div>`;
  }).join("");
  return `<p class="summary">A = ${escapeHtml(resp.side_a)}, ` +
    `B = ${escapeHtml(resp.side_b)} — ` +
    `<span class="swatch a_only">A only</span> ` +
    `<span class="swatch b_only">B only</span> ` +
    `<span class="swatch shared">shared</span></p>` +
    `<div class="diff">${blocks}</div>`;
}

// --- knowledge-rich contexts ---------------------------------------------------

export function renderKrcs(krcs: Krc[], headword: string): string {
  if (krcs.length === 0) {
    return `<p class="empty">No contexts.</p>`;
  }
  const items = krcs.map((k) =>
    `<li class="krc"><span class="rel-tag">${escapeHtml(k.relation)}</span> ` +
    `<span class="doc">${escapeHtml(k.doc_id)}</span> ` +
    `${escapeHtml(k.sentence)}</li>`,
  ).join("");
  return `<p class="summary">${krcs.length} defining contexts for ` +
    `<strong>${escapeHtml(headword)}</strong></p><ul class="krcs">${items}</ul>`;
}

// --- word list / keywords --------------------------------------------------------

export function renderWordlist(resp: WordlistResponse): string {
  const rows = resp.rows.map((r) =>
    `<tr><td>${escapeHtml(r.key)}</td><td class="num">${r.freq}</td></tr>`,
  ).join("");
  return `<p class="summary">total <span class="total-badge">${resp.total}</span></p>` +
    `<table class="freq"><tr><th>key</th><th>freq</th></tr>${rows}</table>`;
}

export function renderKeywords(rows: KeywordRow[]): string {
  if (rows.length === 0) return `<p class="empty">No keywords.</p>`;
  const body = rows.map((r) =>
    `<tr><td>${escapeHtml(r.key)}</td>` +
    `<td class="num">${r.freq_focus}</td><td class="num">${r.freq_ref}</td>` +
    `<td class="num">${fmtScore(r.fpm_focus)}</td>` +
    `<td class="num">${fmtScore(r.fpm_ref)}</td>` +
    `<td class="num">${fmtScore(r.score)}</td></tr>`,
  ).join("");
  return `<table class="freq"><tr><th>key</th><th>f focus</th><th>f ref</th>` +
    `<th>fpm focus</th><th>fpm ref</th><th>score</th></tr>${body}</table>`;
}

// --- corpus card / errors ---------------------------------------------------------

export function renderCorpusInfo(info: CorpusInfo): string {
  const subs = info.subcorpora.map((s) =>
    `${escapeHtml(s.name)} (${s.token_size})`).join(", ") || "none";
  return `<span>${info.documents} documents · ${info.sentences} ` +
    `sentences · ${info.tokens} tokens · ${info.distinct_lemmas} ` +
    `lemmas · subcorpora: ${subs}</span>`;
}

/**
 * Inline error box. For query syntax errors with a position the offending
 * query is echoed with a caret under the failing column.
 */
export function renderError(err: ApiErrorBody, queryText?: string): string {
  let caret = "";
  if (err.position !== undefined && queryText !== undefined) {
    const col = Math.max(0, Math.min(err.position, queryText.length));
    caret = `<pre class="caret">${escapeHtml(queryText)}\n` +
      `${" ".repeat(col)}^</pre>`;
  }
  return `<div class="error"><strong>${escapeHtml(err.code)}</strong>: ` +
    `${escapeHtml(err.message)}${caret}</div>`;
}
