// Wire-level contract: what the client actually puts on the network.

import { readFileSync } from "node:fs";
import { afterEach, describe, expect, it, vi } from "vitest";

import { api, ApiError, apiBase } from "../src/api.js";
import { buildSearchRequest, initialState } from "../src/state.js";
import type { ApiErrorBody } from "../src/types.js";

interface Captured {
  url: string;
  method: string;
  body: unknown;
}

function stubFetch(status: number, payload: unknown): Captured {
  const captured: Captured = { url: "", method: "GET", body: undefined };
  vi.stubGlobal("fetch", async (url: string, init?: RequestInit) => {
    captured.url = url;
    captured.method = init?.method ?? "GET";
    captured.body = init?.body ? JSON.parse(init.body as string) : undefined;
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "content-type": "application/json" },
    });
  });
  return captured;
}

afterEach(() => {
  vi.unstubAllGlobals();
  delete (globalThis as { SKETCHLET_API_BASE?: string }).SKETCHLET_API_BASE;
});

describe("search request body", () => {
  it("carries facet selections losslessly as the server filter", async () => {
    const captured = stubFetch(200, {
      total: 0, offset: 0, limit: 20, lines: [],
    });
    const state = initialState();
    state.kind = "lemma";
    state.text = "amount";
    state.facets = { user: ["Expert"], variant: ["American"] };
    state.yearRange = [2010, 2016];
    state.subcorpus = "British English";
    await api.search(buildSearchRequest(state));

    expect(captured.url).toBe("/api/search");
    expect(captured.method).toBe("POST");
    expect(captured.body).toEqual({
      query: { lemma: "amount" },
      filter: {
        user: ["Expert"],
        variant: ["American"],
        year_range: [2010, 2016],
      },
      subcorpus: "British English",
      page: { offset: 0, limit: 20 },
    });
  });
});

describe("error responses", () => {
  it("surfaces code, message, and position from the body", async () => {
    const err = JSON.parse(readFileSync(
      new URL("./fixtures/error_syntax.json", import.meta.url),
      "utf8")) as ApiErrorBody;
    stubFetch(400, err);
    const thrown = await api.search({ query: { cql: "[lemma=" } })
      .then(() => null, (e: unknown) => e);
    expect(thrown).toBeInstanceOf(ApiError);
    const apiErr = thrown as ApiError;
    expect(apiErr.status).toBe(400);
    expect(apiErr.body.code).toBe("SyntaxError");
    expect(apiErr.body.position).toBe(7);
  });

  it("falls back to an HTTP error when the body is not JSON", async () => {
    vi.stubGlobal("fetch", async () =>
      new Response("gateway fell over", { status: 502 }));
    const thrown = await api.corpus().then(() => null, (e: unknown) => e);
    const apiErr = thrown as ApiError;
    expect(apiErr.body.code).toBe("HttpError");
    expect(apiErr.body.message).toBe("HTTP 502");
  });
});

describe("base URL", () => {
  it("defaults to same-origin paths", () => {
    expect(apiBase()).toBe("");
  });

  it("honors a runtime override", async () => {
    (globalThis as { SKETCHLET_API_BASE?: string }).SKETCHLET_API_BASE =
      "http://127.0.0.1:8080";
    const captured = stubFetch(200, { krcs: [] });
    await api.krcs({ lemma: "erosion" });
    expect(captured.url).toBe("http://127.0.0.1:8080/api/krcs");
  });
});
