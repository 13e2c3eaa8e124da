import { describe, expect, it } from "vitest";

import { chartPosition, placeValues, thresholdsFrom } from "../src/quadrant";
import type { SkillRow } from "../src/types";

function row(skill: string, premium: number | null, automation: number | null): SkillRow {
  return {
    skill,
    premium,
    price_factor: 1,
    price_additive: 0,
    complementarity_premium: 0.01,
    complementarity_price: 0.01,
    automation_probability: automation,
    demand: 10,
    supply: 5,
    community: 0,
    community_label: "community-0",
  };
}

const ROWS = [row("a", 1.0, 0.2), row("b", -0.5, 0.8), row("c", 0.5, 0.4), row("d", 0.0, 0.6)];
// means: premium 0.25, automation 0.5

describe("thresholdsFrom", () => {
  it("averages rows with both metrics", () => {
    const t = thresholdsFrom(ROWS);
    expect(t.meanPremium).toBeCloseTo(0.25, 12);
    expect(t.meanAutomation).toBeCloseTo(0.5, 12);
  });

  it("ignores rows with missing metrics", () => {
    const t = thresholdsFrom([...ROWS, row("x", null, 0.9), row("y", 5.0, null)]);
    expect(t.meanPremium).toBeCloseTo(0.25, 12);
  });

  it("throws when no row is complete", () => {
    expect(() => thresholdsFrom([row("x", null, null)])).toThrow();
  });
});

describe("placeValues", () => {
  const t = { meanPremium: 0.25, meanAutomation: 0.5 };

  it("covers all four quadrants", () => {
    expect(placeValues(1.0, 0.2, t)).toBe("high-value-low-risk");
    expect(placeValues(1.0, 0.8, t)).toBe("high-value-high-risk");
    expect(placeValues(-0.5, 0.2, t)).toBe("low-value-low-risk");
    expect(placeValues(-0.5, 0.8, t)).toBe("low-value-high-risk");
  });

  it("treats the premium mean as high value and the automation mean as high risk", () => {
    expect(placeValues(0.25, 0.5, t)).toBe("high-value-high-risk");
  });
});

describe("chartPosition", () => {
  it("maps higher premium upward and higher risk rightward", () => {
    const lowRisk = chartPosition(1.0, 0.2, ROWS, 400, 300);
    const highRisk = chartPosition(1.0, 0.8, ROWS, 400, 300);
    expect(highRisk.x).toBeGreaterThan(lowRisk.x);
    const lowValue = chartPosition(-0.5, 0.2, ROWS, 400, 300);
    expect(lowValue.y).toBeGreaterThan(lowRisk.y); // SVG y grows downward
  });

  it("stays inside the padded viewport", () => {
    for (const r of ROWS) {
      const p = chartPosition(r.premium!, r.automation_probability!, ROWS, 400, 300);
      expect(p.x).toBeGreaterThanOrEqual(20);
      expect(p.x).toBeLessThanOrEqual(380);
      expect(p.y).toBeGreaterThanOrEqual(20);
      expect(p.y).toBeLessThanOrEqual(280);
    }
  });
});
