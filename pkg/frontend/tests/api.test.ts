import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { fixedResponse } from "./replay.js";

describe("ApiClient", () => {
  it("returns parsed JSON bodies", async () => {
    const client = new ApiClient("http://x", fixedResponse(200, { status: "ok" }));
    expect(await client.health()).toEqual({ status: "ok" });
  });

  it("maps 204 end-of-stream to null", async () => {
    const client = new ApiClient("http://x", fixedResponse(204, null));
    expect(await client.nextBar("abc")).toBeNull();
  });

  it("throws ApiError carrying the service error code", async () => {
    const client = new ApiClient(
      "http://x",
      fixedResponse(409, { code: "SESSION_SEALED", message: "session is sealed" }),
    );
    const err = await client.seal("abc").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.code).toBe("SESSION_SEALED");
  });

  it("survives non-JSON error bodies", async () => {
    const fetchImpl = async () => new Response("boom", { status: 500 });
    const client = new ApiClient("http://x", fetchImpl);
    const err = await client.health().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("HTTP_ERROR");
  });

  it("builds report query strings only for supplied params", async () => {
    const seen: string[] = [];
    const fetchImpl = async (url: string) => {
      seen.push(url);
      return new Response("{}", { status: 200, headers: { "content-type": "application/json" } });
    };
    const client = new ApiClient("http://x", fetchImpl);
    await client.report("s", { horizon: 10, atr: 5, k: 1 });
    await client.report("s");
    expect(seen[0]).toBe("http://x/sessions/s/report?horizon=10&atr=5&k=1");
    expect(seen[1]).toBe("http://x/sessions/s/report");
  });
});
