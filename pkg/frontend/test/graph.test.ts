import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { forceLayout } from "../src/force";
import { buildNeighborhood } from "../src/render";
import { rankMatches } from "../src/typeahead";
import type { NeighborRow, NeighborsResponse, SkillRow } from "../src/types";

const FIXTURES = join(__dirname, "fixtures");

function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

describe("forceLayout", () => {
  const ids = ["a", "b", "c", "d"];
  const edges = [
    { source: "a", target: "b", weight: 2 },
    { source: "b", target: "c", weight: 1 },
  ];

  it("is deterministic for the same input", () => {
    const one = forceLayout(ids, edges, 400, 300);
    const two = forceLayout(ids, edges, 400, 300);
    expect(one).toEqual(two);
  });

  it("keeps nodes inside the viewport", () => {
    for (const node of forceLayout(ids, edges, 400, 300)) {
      expect(node.x).toBeGreaterThanOrEqual(10);
      expect(node.x).toBeLessThanOrEqual(390);
      expect(node.y).toBeGreaterThanOrEqual(10);
      expect(node.y).toBeLessThanOrEqual(290);
    }
  });

  it("pulls connected nodes closer than disconnected ones", () => {
    const layout = forceLayout(ids, edges, 400, 300);
    const pos = new Map(layout.map((n) => [n.id, n]));
    const dist = (p: string, q: string) => {
      const a = pos.get(p)!;
      const b = pos.get(q)!;
      return Math.hypot(a.x - b.x, a.y - b.y);
    };
    expect(dist("a", "b")).toBeLessThan(dist("a", "d"));
  });
});

describe("buildNeighborhood", () => {
  it("assembles the union neighborhood from recorded responses", () => {
    const recorded = fixture<Record<string, NeighborsResponse>>("neighbors.json");
    const bundle = Object.keys(recorded);
    const perSkill = new Map<string, NeighborRow[]>(
      bundle.map((slug) => [slug, recorded[slug].neighbors]),
    );
    const { ids, edges, truncated } = buildNeighborhood(bundle, perSkill);
    for (const slug of bundle) expect(ids).toContain(slug);
    expect(edges.length).toBeGreaterThan(0);
    for (const edge of edges) {
      expect(bundle).toContain(edge.source);
      expect(ids).toContain(edge.target);
    }
    expect(truncated).toBe(false);
  });

  it("truncates oversized neighborhoods by edge weight", () => {
    const many: NeighborRow[] = [];
    for (let i = 0; i < 60; i++) {
      many.push({
        skill: `n${i.toString().padStart(2, "0")}`,
        premium: 0,
        price_factor: 1,
        price_additive: 0,
        complementarity_premium: 0,
        complementarity_price: 0,
        automation_probability: 0.5,
        demand: 1,
        supply: 1,
        community: 0,
        community_label: "community-0",
        weight: 60 - i,
      });
    }
    const { ids, truncated } = buildNeighborhood(["hub"], new Map([["hub", many]]), 20);
    expect(truncated).toBe(true);
    expect(ids.length).toBeLessThanOrEqual(21);
    expect(ids).toContain("n00"); // strongest link survives
  });
});

describe("rankMatches", () => {
  const skills = fixture<{ skills: SkillRow[] }>("skills.json").skills;

  it("prefers prefix matches and respects the limit", () => {
    const matches = rankMatches("skill-0", skills, 5);
    expect(matches.length).toBe(5);
    for (const m of matches) expect(m.skill.startsWith("skill-0")).toBe(true);
  });

  it("falls back to substring matches", () => {
    const matches = rankMatches("ill-04", skills, 3);
    expect(matches.length).toBeGreaterThan(0);
    for (const m of matches) expect(m.skill).toContain("ill-04");
  });

  it("returns nothing for an empty query", () => {
    expect(rankMatches("   ", skills)).toEqual([]);
  });
});
