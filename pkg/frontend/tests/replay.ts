/** Fixture replayer: a fetch stand-in that serves the recorded exchanges
in order and fails loudly on any deviation from the recorded protocol. */

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import path from "node:path";
import type { FetchLike } from "../src/api.js";

export interface Exchange {
  method: string;
  path: string;
  status: number;
  response: unknown;
  request?: unknown;
}

export interface Recording {
  session_id: string;
  exchanges: Exchange[];
}

const here = path.dirname(fileURLToPath(import.meta.url));

export function loadRecording(): Recording {
  const raw = readFileSync(path.join(here, "fixtures", "recorded.json"), "utf-8");
  return JSON.parse(raw) as Recording;
}

export class FixtureServer {
  private cursor = 0;
  constructor(private readonly exchanges: Exchange[]) {}

  get consumed(): number {
    return this.cursor;
  }

  get remaining(): number {
    return this.exchanges.length - this.cursor;
  }

  fetch: FetchLike = async (url, init) => {
    const expected = this.exchanges[this.cursor];
    if (!expected) {
      throw new Error(`unexpected request beyond recording: ${init?.method} ${url}`);
    }
    const method = init?.method ?? "GET";
    const parsed = new URL(url, "http://fixture");
    const pathAndQuery = parsed.pathname + parsed.search;
    if (method !== expected.method || pathAndQuery !== expected.path) {
      throw new Error(
        `request #${this.cursor}: got ${method} ${pathAndQuery}, ` +
          `recorded ${expected.method} ${expected.path}`,
      );
    }
    if (expected.request !== undefined) {
      const body = init?.body ? JSON.parse(String(init.body)) : undefined;
      if (JSON.stringify(body) !== JSON.stringify(expected.request)) {
        throw new Error(`request #${this.cursor}: body differs from recording`);
      }
    }
    this.cursor += 1;
    if (expected.status === 204) {
      return new Response(null, { status: 204 });
    }
    return new Response(JSON.stringify(expected.response), {
      status: expected.status,
      headers: { "content-type": "application/json" },
    });
  };
}

/** A one-off fetch returning a fixed response, for unit cases. */
export function fixedResponse(status: number, body: unknown): FetchLike {
  return async () =>
    status === 204
      ? new Response(null, { status })
      : new Response(JSON.stringify(body), {
          status,
          headers: { "content-type": "application/json" },
        });
}
