import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, SequenceGate, type FetchLike } from "../src/api";

const FIXTURES = join(__dirname, "fixtures");

function fixture(name: string): unknown {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8"));
}

/** Replays recorded bodies keyed by URL path (query string included). */
function replayFetch(routes: Record<string, unknown>, status = 200): FetchLike {
  return async (url) => {
    const body = routes[url];
    if (body === undefined) {
      return new Response(
        JSON.stringify({ error: { code: "unknown-skill", message: `no route ${url}`, suggestions: ["skill-000"] } }),
        { status: 404, headers: { "Content-Type": "application/json" } },
      );
    }
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
}

describe("ApiClient", () => {
  it("fetches and types recorded skills", async () => {
    const client = new ApiClient(
      "",
      replayFetch({ "/api/v1/skills?sort=skill&limit=100000": fixture("skills.json") }),
    );
    const res = await client.skills({ sort: "skill", limit: 100000 });
    expect(res.skills.length).toBeGreaterThan(10);
    expect(res.skills[0]).toHaveProperty("premium");
    expect(res.skills[0]).toHaveProperty("community_label");
  });

  it("posts whatif bodies and returns the result", async () => {
    const whatifs = fixture("whatifs.json") as Record<string, unknown>;
    const first = Object.values(whatifs)[0];
    let captured: RequestInit | undefined;
    const client = new ApiClient("", async (url, init) => {
      captured = init;
      expect(url).toBe("/api/v1/whatif");
      return new Response(JSON.stringify(first), { status: 200 });
    });
    const result = await client.whatif(["skill-000"], "skill-002");
    expect(captured?.method).toBe("POST");
    expect(JSON.parse(String(captured?.body))).toEqual({
      bundle: ["skill-000"],
      candidate: "skill-002",
    });
    expect(result).toEqual(first);
  });

  it("surfaces error bodies with suggestions", async () => {
    const client = new ApiClient("", replayFetch({}));
    await expect(client.skill("nope")).rejects.toMatchObject({
      status: 404,
      code: "unknown-skill",
      suggestions: ["skill-000"],
    });
  });

  it("maps network failure to status 0", async () => {
    const client = new ApiClient("", async () => {
      throw new Error("connection refused");
    });
    try {
      await client.meta();
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(0);
    }
  });
});

describe("SequenceGate", () => {
  it("accepts only the newest request", () => {
    const gate = new SequenceGate();
    const first = gate.next();
    const second = gate.next();
    expect(gate.accept(first)).toBe(false); // a newer request is in flight
    expect(gate.accept(second)).toBe(true);
  });

  it("accepts sequential requests in order", () => {
    const gate = new SequenceGate();
    const a = gate.next();
    expect(gate.accept(a)).toBe(true);
    const b = gate.next();
    expect(gate.accept(b)).toBe(true);
  });
});
