/** Shared fixtures for UI tests: canned responses and a route-based fetch stub. */

import type { ChatResponse, IntentInfo } from "../src/api.js";

export const C3 = "c3".repeat(20);

export function chatResponse(overrides: Partial<ChatResponse> = {}): ChatResponse {
  return {
    reply: `The following commits fixed HHH-1:\n${C3} — alice — 2020-01-20 — HHH-1 fix NPE`,
    intent: "Q1",
    confidence: 0.99,
    entities: [{ type: "ISSUE_KEY", surface: "HHH-1", span: [0, 5], value: "HHH-1" }],
    elapsed_ms: 1.5,
    payload: {
      kind: "q1",
      rows: [{ hash: C3, author_name: "alice", date: "2020-01-20", message: "HHH-1 fix NPE" }],
      scalar: null,
      truncated: false,
      matched_paths: [],
      empty_denominator: false,
    },
    ...overrides,
  };
}

export function intentList(count = 17): IntentInfo[] {
  const intents: IntentInfo[] = [];
  for (let i = 1; i <= Math.min(count, 15); i++) {
    intents.push({ intent_id: `Q${i}`, example: `example question ${i}` });
  }
  if (count >= 16) intents.push({ intent_id: "GREETING", example: "Hello!" });
  if (count >= 17) intents.push({ intent_id: "BOT_INFO", example: "What can you do?" });
  return intents;
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export type Route = (init?: RequestInit) => Response | Promise<Response>;

/** fetch stub keyed by path suffix; records every call it serves */
export function routedFetch(routes: Record<string, Route>) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    for (const [suffix, route] of Object.entries(routes)) {
      if (new URL(url, "http://local").pathname === suffix) return route(init);
    }
    throw new TypeError(`no route for ${url}`);
  };
  return { fetchFn, calls };
}
