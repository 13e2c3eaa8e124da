/** Ranking for the bundle builder's skill typeahead. */

import type { SkillRow } from "./types";

/** Prefix matches first, then substring matches, each by demand. */
export function rankMatches(query: string, rows: SkillRow[], limit = 8): SkillRow[] {
  const q = query.trim().toLowerCase();
  if (!q) return [];
  const prefix: SkillRow[] = [];
  const inner: SkillRow[] = [];
  for (const row of rows) {
    const slug = row.skill.toLowerCase();
    if (slug.startsWith(q)) prefix.push(row);
    else if (slug.includes(q)) inner.push(row);
  }
  const byDemand = (a: SkillRow, b: SkillRow) =>
    b.demand - a.demand || a.skill.localeCompare(b.skill);
  prefix.sort(byDemand);
  inner.sort(byDemand);
  return [...prefix, ...inner].slice(0, limit);
}
