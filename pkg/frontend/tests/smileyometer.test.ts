// Smileyometer contract: exactly five options, the clicked rating is
// POSTed verbatim through the real client, and a rejected rating is not
// recorded locally.

import { describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import type { FetchLike } from "../src/api.js";
import { SMILEY_OPTIONS, createSmileyometer } from "../src/smileyometer.js";

interface Captured {
  url: string;
  method: string | undefined;
  body: string | undefined;
}

function fakeFetch(status: number, responseBody: unknown): { fetch: FetchLike; calls: Captured[] } {
  const calls: Captured[] = [];
  const fetch: FetchLike = (input, init) => {
    calls.push({ url: input, method: init?.method, body: init?.body as string | undefined });
    return Promise.resolve({
      ok: status < 400,
      status,
      statusText: String(status),
      json: () => Promise.resolve(responseBody),
    } as Response);
  };
  return { fetch, calls };
}

describe("smileyometer", () => {
  it("offers exactly five smileys rated 1..5", () => {
    expect(SMILEY_OPTIONS).toHaveLength(5);
    expect(SMILEY_OPTIONS.map((o) => o.rating)).toEqual([1, 2, 3, 4, 5]);
    const meter = createSmileyometer(() => Promise.resolve());
    expect(meter.options).toHaveLength(5);
  });

  it("posts the clicked rating verbatim", async () => {
    const { fetch, calls } = fakeFetch(201, {});
    const client = new ApiClient("/api/v1", fetch);
    const meter = createSmileyometer((rating) => client.feedback(rating));

    await meter.select(5);
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("/api/v1/feedback");
    expect(calls[0].method).toBe("POST");
    expect(calls[0].body).toBe('{"rating":5}');
    expect(meter.state.submitted).toBe(5);
    expect(meter.state.error).toBeNull();

    await meter.select(1);
    expect(calls[1].body).toBe('{"rating":1}');
    expect(meter.state.submitted).toBe(1);
  });

  it("keeps nothing locally when the server rejects the rating", async () => {
    const { fetch, calls } = fakeFetch(400, { error: "schema_error", message: "rating out of range" });
    const client = new ApiClient("/api/v1", fetch);
    const meter = createSmileyometer((rating) => client.feedback(rating));

    await meter.select(3);
    expect(calls).toHaveLength(1);
    expect(meter.state.submitted).toBeNull();
    expect(meter.state.error).toBe("rating out of range");
  });

  it("refuses ratings that are not one of the five smileys", async () => {
    const { fetch, calls } = fakeFetch(201, {});
    const client = new ApiClient("/api/v1", fetch);
    const meter = createSmileyometer((rating) => client.feedback(rating));

    await meter.select(7);
    expect(calls).toHaveLength(0);
    expect(meter.state.submitted).toBeNull();
    expect(meter.state.error).toContain("7");
  });
});
