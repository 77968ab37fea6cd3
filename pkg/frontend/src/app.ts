// DOM wiring. All corpus data on screen comes from API responses; this
// file only moves values between form controls, requests, and renderers.

import { api, ApiError } from "./api.js";
import {
  buildSearchRequest, canNext, canPrev, canSubmit, clampOffset,
  initialState, makeGate, nextOffset, prevOffset,
} from "./state.js";
import {
  renderConcordance, renderCorpusInfo, renderDiff, renderError, renderFreq,
  renderKeywords, renderKrcs, renderSketch, renderWordlist,
} from "./render.js";
import type {
  CorpusInfo, DiffMode, DiffRequest, QueryKind,
} from "./types.js";

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

const input = (id: string) => $(id) as HTMLInputElement;
const select = (id: string) => $(id) as HTMLSelectElement;
const button = (id: string) => $(id) as HTMLButtonElement;

function showError(id: string, err: unknown, queryText?: string): void {
  const box = $(id);
  if (err instanceof ApiError) {
    box.innerHTML = renderError(err.body, queryText);
  } else {
    box.innerHTML = renderError(
      { code: "Error", message: String(err) }, undefined);
  }
}

// --- view switching ----------------------------------------------------------

const VIEWS = ["search", "freq", "sketch", "diff", "wordlist", "keywords"];

function switchView(name: string): void {
  for (const v of VIEWS) {
    ($(`view-${v}`) as HTMLElement).hidden = v !== name;
  }
  document.querySelectorAll<HTMLButtonElement>("#tabs button").forEach((b) => {
    b.classList.toggle("active", b.dataset["view"] === name);
  });
}

// --- search view --------------------------------------------------------------

const state = initialState();
const searchGate = makeGate();
let lastTotal = 0;

function readFacetSelections(): void {
  const facets: Record<string, string[]> = {};
  document.querySelectorAll<HTMLSelectElement>("#facets select").forEach((sel) => {
    const attr = sel.dataset["attr"];
    if (!attr) return;
    const chosen = Array.from(sel.selectedOptions).map((o) => o.value);
    if (chosen.length > 0) facets[attr] = chosen;
  });
  state.facets = facets;
  const lo = input("year-lo").value.trim();
  const hi = input("year-hi").value.trim();
  state.yearRange = lo && hi ? [Number(lo), Number(hi)] : null;
}

function updatePager(): void {
  const page = { offset: state.offset, limit: state.limit };
  button("pg-prev").disabled = !canPrev(page);
  button("pg-next").disabled = !canNext(page, lastTotal);
  $("pg-info").textContent = lastTotal
    ? `${state.offset + 1}–${Math.min(state.offset + state.limit, lastTotal)} of ${lastTotal}`
    : "";
}

async function runSearch(): Promise<void> {
  if (!canSubmit(state)) return;
  const ticket = searchGate.next();
  $("search-error").innerHTML = "";
  try {
    const resp = await api.search(buildSearchRequest(state));
    if (!searchGate.isCurrent(ticket)) return;  // superseded
    lastTotal = resp.total;
    state.offset = clampOffset(state.offset, resp.total, state.limit);
    $("search-results").innerHTML = renderConcordance(resp);
  } catch (err) {
    if (!searchGate.isCurrent(ticket)) return;
    lastTotal = 0;
    $("search-results").innerHTML = "";
    showError("search-error", err, state.text);
  }
  updatePager();
}

function bindSearchForm(): void {
  const text = input("q-text");
  const refreshSubmit = () => {
    state.kind = select("q-kind").value as QueryKind;
    state.text = text.value;
    button("q-submit").disabled = !canSubmit(state);
  };
  text.addEventListener("input", refreshSubmit);
  select("q-kind").addEventListener("change", refreshSubmit);
  refreshSubmit();

  $("search-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    state.offset = 0;
    state.contextLemma = input("q-ctx-lemma").value;
    state.contextWindow = Number(input("q-ctx-window").value) || 15;
    state.subcorpus = select("q-subcorpus").value || null;
    readFacetSelections();
    void runSearch();
  });

  // any facet change re-issues the current search from page 0
  const refine = () => {
    readFacetSelections();
    state.subcorpus = select("q-subcorpus").value || null;
    state.offset = 0;
    if (canSubmit(state)) void runSearch();
  };
  $("facets").addEventListener("change", refine);
  input("year-lo").addEventListener("change", refine);
  input("year-hi").addEventListener("change", refine);
  select("q-subcorpus").addEventListener("change", refine);

  button("pg-prev").addEventListener("click", () => {
    state.offset = prevOffset({ offset: state.offset, limit: state.limit });
    void runSearch();
  });
  button("pg-next").addEventListener("click", () => {
    state.offset = nextOffset(
      { offset: state.offset, limit: state.limit }, lastTotal);
    void runSearch();
  });
}

// --- frequency view -------------------------------------------------------------

const freqGate = makeGate();

function bindFreqForm(): void {
  const text = input("f-text");
  const refresh = () => {
    button("f-submit").disabled = text.value.trim().length === 0;
  };
  text.addEventListener("input", refresh);
  refresh();

  $("freq-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const kind = select("f-kind").value as QueryKind;
    const ticket = freqGate.next();
    $("freq-error").innerHTML = "";
    api.freq({
      query: { [kind]: text.value.trim() },
      group_by: select("f-group").value,
    }).then((resp) => {
      if (!freqGate.isCurrent(ticket)) return;
      const group = select("f-group").value;
      const heading = group === "node_forms"
        ? "node form" : group.split(":", 2)[1] ?? group;
      $("freq-results").innerHTML = renderFreq(resp, heading);
    }).catch((err) => {
      if (!freqGate.isCurrent(ticket)) return;
      $("freq-results").innerHTML = "";
      showError("freq-error", err, text.value.trim());
    });
  });
}

// --- sketch view ---------------------------------------------------------------

const sketchGate = makeGate();

function bindSketchForm(): void {
  const lemma = input("s-lemma");
  const refresh = () => {
    button("s-submit").disabled = lemma.value.trim().length === 0;
  };
  lemma.addEventListener("input", refresh);
  refresh();

  $("sketch-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const ticket = sketchGate.next();
    $("sketch-error").innerHTML = "";
    $("krc-results").innerHTML = "";
    const req = {
      lemma: lemma.value.trim(),
      ...(input("s-form").value.trim()
        ? { form: input("s-form").value.trim() } : {}),
      min_freq: Number(input("s-minfreq").value) || 1,
      ...(select("s-subcorpus").value
        ? { subcorpus: select("s-subcorpus").value } : {}),
    };
    api.sketch(req).then((resp) => {
      if (!sketchGate.isCurrent(ticket)) return;
      $("sketch-results").innerHTML = renderSketch(resp);
    }).catch((err) => {
      if (!sketchGate.isCurrent(ticket)) return;
      $("sketch-results").innerHTML = "";
      showError("sketch-error", err);
    });
  });

  // clicking a collocate row pulls the contexts behind it
  $("sketch-results").addEventListener("click", (ev) => {
    const row = (ev.target as HTMLElement).closest<HTMLElement>(".sketch-row");
    if (!row) return;
    const relation = row.dataset["relation"];
    const collocate = row.dataset["collocate"];
    const headword = lemma.value.trim();
    if (!relation || !collocate || !headword) return;
    api.krcs({
      lemma: headword, relation, collocate,
      ...(select("s-subcorpus").value
        ? { subcorpus: select("s-subcorpus").value } : {}),
    }).then((resp) => {
      $("krc-results").innerHTML = renderKrcs(resp.krcs, headword);
    }).catch((err) => showError("sketch-error", err));
  });
}

// --- diff view ------------------------------------------------------------------

const diffGate = makeGate();

function diffRequest(): DiffRequest | null {
  const mode = select("d-mode").value as DiffMode;
  if (mode === "two-lemmas") {
    const a = input("d-lemma-a").value.trim();
    const b = input("d-lemma-b").value.trim();
    return a && b ? { mode, lemma_a: a, lemma_b: b } : null;
  }
  if (mode === "two-subcorpora") {
    const lemma = input("d-lemma-s").value.trim();
    const a = select("d-sub-a").value;
    const b = select("d-sub-b").value;
    return lemma && a && b
      ? { mode, lemma, subcorpus_a: a, subcorpus_b: b } : null;
  }
  const lemma = input("d-lemma-w").value.trim();
  const a = input("d-form-a").value.trim();
  const b = input("d-form-b").value.trim();
  return lemma && a && b ? { mode, lemma, form_a: a, form_b: b } : null;
}

function bindDiffForm(): void {
  const refresh = () => {
    const mode = select("d-mode").value;
    $("d-fields-lemmas").hidden = mode !== "two-lemmas";
    $("d-fields-subcorpora").hidden = mode !== "two-subcorpora";
    $("d-fields-wordforms").hidden = mode !== "two-wordforms";
    button("d-submit").disabled = diffRequest() === null;
  };
  $("diff-form").addEventListener("input", refresh);
  select("d-mode").addEventListener("change", refresh);
  refresh();

  $("diff-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const req = diffRequest();
    if (!req) return;
    const ticket = diffGate.next();
    $("diff-error").innerHTML = "";
    api.sketchdiff(req).then((resp) => {
      if (!diffGate.isCurrent(ticket)) return;
      $("diff-results").innerHTML = renderDiff(resp);
    }).catch((err) => {
      if (!diffGate.isCurrent(ticket)) return;
      $("diff-results").innerHTML = "";
      showError("diff-error", err);
    });
  });
}

// --- word list / keywords ----------------------------------------------------------

const wordlistGate = makeGate();
const keywordsGate = makeGate();

function bindWordlistForm(): void {
  $("wordlist-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const ticket = wordlistGate.next();
    $("wordlist-error").innerHTML = "";
    api.wordlist({
      attr: select("w-attr").value,
      ngram: Number(input("w-ngram").value) || 1,
      ...(input("w-regex").value.trim()
        ? { regex: input("w-regex").value.trim() } : {}),
      ...(input("w-pos").value.trim()
        ? { pos_filter: input("w-pos").value.trim() } : {}),
      min_freq: Number(input("w-minfreq").value) || 1,
    }).then((resp) => {
      if (!wordlistGate.isCurrent(ticket)) return;
      $("wordlist-results").innerHTML = renderWordlist(resp);
    }).catch((err) => {
      if (!wordlistGate.isCurrent(ticket)) return;
      $("wordlist-results").innerHTML = "";
      showError("wordlist-error", err, input("w-regex").value.trim());
    });
  });
}

function bindKeywordsForm(): void {
  const refresh = () => {
    button("k-submit").disabled = !select("k-focus").value;
  };
  select("k-focus").addEventListener("change", refresh);

  $("keywords-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const ticket = keywordsGate.next();
    $("keywords-error").innerHTML = "";
    api.keywords({
      focus: { subcorpus: select("k-focus").value },
      ref: select("k-ref").value
        ? { subcorpus: select("k-ref").value } : {},
      attr: select("k-attr").value,
      smooth: Number(input("k-smooth").value) || 1,
    }).then((resp) => {
      if (!keywordsGate.isCurrent(ticket)) return;
      $("keywords-results").innerHTML = renderKeywords(resp.rows);
    }).catch((err) => {
      if (!keywordsGate.isCurrent(ticket)) return;
      $("keywords-results").innerHTML = "";
      showError("keywords-error", err);
    });
  });
}

// --- boot -------------------------------------------------------------------------

function fillSubcorpusSelect(sel: HTMLSelectElement, info: CorpusInfo,
                             withBlank: boolean): void {
  if (withBlank) {
    // keep the existing blank "whole corpus" option
  } else {
    sel.innerHTML = "";
  }
  for (const sub of info.subcorpora) {
    const opt = document.createElement("option");
    opt.value = sub.name;
    opt.textContent = `${sub.name} (${sub.token_size} tokens)`;
    sel.appendChild(opt);
  }
}

function buildFacets(info: CorpusInfo): void {
  const box = $("facets");
  box.innerHTML = "";
  for (const attr of Object.keys(info.text_types).sort()) {
    if (attr === "year") continue;  // year gets the range inputs
    const values = info.text_types[attr] ?? [];
    if (values.length === 0) continue;
    const label = document.createElement("label");
    label.textContent = attr;
    const sel = document.createElement("select");
    sel.multiple = true;
    sel.size = Math.min(4, values.length);
    sel.dataset["attr"] = attr;
    for (const v of values) {
      const opt = document.createElement("option");
      opt.value = String(v);
      opt.textContent = String(v);
      sel.appendChild(opt);
    }
    label.appendChild(sel);
    box.appendChild(label);
  }
}

function buildFreqGroups(info: CorpusInfo): void {
  const sel = select("f-group");
  for (const attr of Object.keys(info.text_types).sort()) {
    const opt = document.createElement("option");
    opt.value = `texttype:${attr}`;
    opt.textContent = `by ${attr}`;
    sel.appendChild(opt);
  }
}

async function boot(): Promise<void> {
  document.querySelectorAll<HTMLButtonElement>("#tabs button").forEach((b) => {
    b.addEventListener("click", () => switchView(b.dataset["view"] ?? "search"));
  });
  bindSearchForm();
  bindFreqForm();
  bindSketchForm();
  bindDiffForm();
  bindWordlistForm();
  bindKeywordsForm();

  try {
    const info = await api.corpus();
    $("corpus-info").innerHTML = renderCorpusInfo(info);
    buildFacets(info);
    buildFreqGroups(info);
    fillSubcorpusSelect(select("q-subcorpus"), info, true);
    fillSubcorpusSelect(select("s-subcorpus"), info, true);
    fillSubcorpusSelect(select("d-sub-a"), info, false);
    fillSubcorpusSelect(select("d-sub-b"), info, false);
    fillSubcorpusSelect(select("k-focus"), info, false);
    fillSubcorpusSelect(select("k-ref"), info, true);
    button("k-submit").disabled = !select("k-focus").value;
  } catch (err) {
    showError("search-error", err);
    $("corpus-info").textContent = "no corpus loaded";
  }
}

void boot();
