/** Premium-vs-automation quadrants, split at the dataset means. */

import type { SkillRow, WhatIfResult } from "./types";

export type Quadrant =
  | "high-value-low-risk"
  | "high-value-high-risk"
  | "low-value-low-risk"
  | "low-value-high-risk";

export interface QuadrantThresholds {
  meanPremium: number;
  meanAutomation: number;
}

/** Mean-split thresholds over every skill with both metrics present. */
export function thresholdsFrom(rows: SkillRow[]): QuadrantThresholds {
  let pSum = 0;
  let aSum = 0;
  let n = 0;
  for (const row of rows) {
    if (row.premium === null || row.automation_probability === null) continue;
    pSum += row.premium;
    aSum += row.automation_probability;
    n += 1;
  }
  if (n === 0) throw new Error("no rows with both premium and automation");
  return { meanPremium: pSum / n, meanAutomation: aSum / n };
}

export function placeValues(
  premium: number,
  automation: number,
  thresholds: QuadrantThresholds,
): Quadrant {
  const highValue = premium >= thresholds.meanPremium;
  const lowRisk = automation < thresholds.meanAutomation;
  if (highValue) return lowRisk ? "high-value-low-risk" : "high-value-high-risk";
  return lowRisk ? "low-value-low-risk" : "low-value-high-risk";
}

/** Quadrant of a what-if result; null when a metric is missing. */
export function placeWhatIf(
  result: WhatIfResult,
  thresholds: QuadrantThresholds,
): Quadrant | null {
  if (result.candidate_premium_in_domain === null || result.automation_probability === null) {
    return null;
  }
  return placeValues(result.candidate_premium_in_domain, result.automation_probability, thresholds);
}

/** Pixel position of a point inside a quadrant chart viewport. */
export function chartPosition(
  premium: number,
  automation: number,
  rows: SkillRow[],
  width: number,
  height: number,
  pad = 20,
): { x: number; y: number } {
  const premia = rows.map((r) => r.premium).filter((v): v is number => v !== null);
  const autos = rows
    .map((r) => r.automation_probability)
    .filter((v): v is number => v !== null);
  const pMin = Math.min(...premia, premium);
  const pMax = Math.max(...premia, premium);
  const aMin = Math.min(...autos, automation);
  const aMax = Math.max(...autos, automation);
  const px = aMax === aMin ? 0.5 : (automation - aMin) / (aMax - aMin);
  const py = pMax === pMin ? 0.5 : (premium - pMin) / (pMax - pMin);
  return {
    x: pad + px * (width - 2 * pad),
    y: height - pad - py * (height - 2 * pad),
  };
}
