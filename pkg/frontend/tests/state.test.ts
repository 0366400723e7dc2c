import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ConsoleStore, truePrice } from "../src/state.js";
import type { Manifest } from "../src/types.js";
import { fixedResponse } from "./replay.js";

function storeWith(fetchImpl: ReturnType<typeof fixedResponse>): ConsoleStore {
  return new ConsoleStore(new ApiClient("http://x", fetchImpl));
}

describe("ConsoleStore invariants", () => {
  it("starts with a blind, empty state", () => {
    const store = storeWith(fixedResponse(200, {}));
    const s = store.getState();
    expect(s.bars).toEqual([]);
    expect(s.manifest).toBeNull();
    expect(s.verification).toBeNull();
    expect(s.report).toBeNull();
    expect(s.revealed).toBe(false);
  });

  it("blocks zone marks on unserved bars locally, without any request", async () => {
    let calls = 0;
    const fetchImpl: typeof fetch = async () => {
      calls += 1;
      return new Response("{}", { status: 200 });
    };
    const store = new ConsoleStore(new ApiClient("http://x", fetchImpl));
    // hand-start a session without going through the network
    (store as unknown as { state: { sessionId: string } }).state.sessionId = "s";
    await store.markZone(3, "down", "peek");
    expect(calls).toBe(0);
    expect(store.getState().banner?.code).toBe("LOOKAHEAD_REJECTED");
  });

  it("keeps bars append-only as the stream advances", async () => {
    let index = 0;
    const fetchImpl: typeof fetch = async () =>
      new Response(
        JSON.stringify({ index: index++, open: 1, high: 2, low: 0.5, close: 1.5 }),
        { status: 200, headers: { "content-type": "application/json" } },
      );
    const store = new ConsoleStore(new ApiClient("http://x", fetchImpl));
    (store as unknown as { state: { sessionId: string } }).state.sessionId = "s";
    const snapshots: number[][] = [];
    store.subscribe((s) => snapshots.push(s.bars.map((b) => b.index)));
    await store.drawNextBar();
    await store.drawNextBar();
    await store.drawNextBar();
    expect(snapshots.at(-1)).toEqual([0, 1, 2]);
    for (let i = 1; i < snapshots.length; i++) {
      const prev = snapshots[i - 1];
      expect(snapshots[i].slice(0, prev.length)).toEqual(prev);
    }
    expect(store.selectableBars()).toEqual([0, 1, 2]);
  });

  it("marks end of stream on 204 and stops there", async () => {
    const store = storeWith(fixedResponse(204, null));
    (store as unknown as { state: { sessionId: string } }).state.sessionId = "s";
    expect(await store.drawNextBar()).toBeNull();
    expect(store.getState().endOfStream).toBe(true);
  });

  it("surfaces service error codes as banners", async () => {
    const store = storeWith(
      fixedResponse(409, { code: "SESSION_SEALED", message: "sealed" }),
    );
    (store as unknown as { state: { sessionId: string } }).state.sessionId = "s";
    await store.drawNextBar();
    expect(store.getState().banner).toEqual({ code: "SESSION_SEALED", message: "sealed" });
  });

  it("refuses the zone form after reveal", async () => {
    const store = storeWith(fixedResponse(200, {}));
    const hidden = store as unknown as {
      state: { sessionId: string; revealed: boolean; bars: unknown[] };
    };
    hidden.state.sessionId = "s";
    hidden.state.revealed = true;
    hidden.state.bars = [{ index: 0, open: 1, high: 1, low: 1, close: 1 }];
    await store.markZone(0, "up", "");
    expect(store.getState().banner?.code).toBe("SESSION_REVEALED");
  });
});

describe("truePrice", () => {
  it("inverts the affine disguise", () => {
    const manifest = { affine_a: 0.5, affine_b: 10 } as Manifest;
    expect(truePrice(0.5 * 1.234 + 10, manifest)).toBeCloseTo(1.234, 12);
  });
});
