/** DOM/SVG rendering helpers: pure functions from data to elements. */

import { forceLayout, type LayoutEdge } from "./force";
import { chartPosition, placeWhatIf, type QuadrantThresholds } from "./quadrant";
import type { NeighborRow, SkillRow, WhatIfResult } from "./types";

const PALETTE = [
  "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

export function communityColor(community: number): string {
  return PALETTE[((community % PALETTE.length) + PALETTE.length) % PALETTE.length];
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function svgEl(tag: string): SVGElement {
  return document.createElementNS("http://www.w3.org/2000/svg", tag);
}

export function pct(value: number | null): string {
  return value === null ? "n/a" : `${(100 * value).toFixed(1)}%`;
}

export function communityBadge(label: string, community: number): HTMLElement {
  const badge = el("span", "badge", label);
  badge.style.backgroundColor = communityColor(community);
  return badge;
}

export function renderWhatIfPanel(
  result: WhatIfResult,
  thresholds: QuadrantThresholds,
  domainLabel: string,
): HTMLElement {
  const panel = el("div", "whatif-result");
  const title = el("h3", "", `what if you learn ${result.candidate}?`);
  panel.appendChild(title);
  if (result.no_op) {
    panel.appendChild(el("p", "hint", "already in your bundle"));
  }
  const rows: [string, string][] = [
    [
      `premium for ${domainLabel} workers`,
      pct(result.candidate_premium_in_domain) + (result.fallback ? " *" : ""),
    ],
    ["complementarity", result.candidate_complementarity.toExponential(3)],
    ["automation risk", pct(result.automation_probability)],
    ["distance from bundle", result.distance === null ? "n/a" : result.distance.toFixed(1)],
    ["verdict score", result.verdict_score.toFixed(3)],
  ];
  const table = el("table", "metrics");
  for (const [name, value] of rows) {
    const tr = el("tr");
    tr.appendChild(el("td", "", name));
    tr.appendChild(el("td", "value", value));
    table.appendChild(tr);
  }
  panel.appendChild(table);
  if (result.fallback) {
    panel.appendChild(
      el("p", "caveat", "* global estimate: too few observations in your domain"),
    );
  }
  const quadrant = placeWhatIf(result, thresholds);
  if (quadrant !== null) {
    panel.appendChild(el("p", `quadrant ${quadrant}`, quadrant.replace(/-/g, " ")));
  }
  return panel;
}

export function renderQuadrantChart(
  rows: SkillRow[],
  highlight: WhatIfResult | null,
  thresholds: QuadrantThresholds,
  width = 420,
  height = 300,
): SVGElement {
  const svg = svgEl("svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "quadrant-chart");
  const meanPos = chartPosition(
    thresholds.meanPremium,
    thresholds.meanAutomation,
    rows,
    width,
    height,
  );
  const vline = svgEl("line");
  vline.setAttribute("x1", String(meanPos.x));
  vline.setAttribute("x2", String(meanPos.x));
  vline.setAttribute("y1", "0");
  vline.setAttribute("y2", String(height));
  vline.setAttribute("class", "mean-line");
  svg.appendChild(vline);
  const hline = svgEl("line");
  hline.setAttribute("x1", "0");
  hline.setAttribute("x2", String(width));
  hline.setAttribute("y1", String(meanPos.y));
  hline.setAttribute("y2", String(meanPos.y));
  hline.setAttribute("class", "mean-line");
  svg.appendChild(hline);
  for (const row of rows) {
    if (row.premium === null || row.automation_probability === null) continue;
    const pos = chartPosition(row.premium, row.automation_probability, rows, width, height);
    const dot = svgEl("circle");
    dot.setAttribute("cx", String(pos.x));
    dot.setAttribute("cy", String(pos.y));
    dot.setAttribute("r", "3");
    dot.setAttribute("fill", communityColor(row.community));
    dot.setAttribute("opacity", "0.6");
    const tooltip = svgEl("title");
    tooltip.textContent = row.skill;
    dot.appendChild(tooltip);
    svg.appendChild(dot);
  }
  if (
    highlight &&
    highlight.candidate_premium_in_domain !== null &&
    highlight.automation_probability !== null
  ) {
    const pos = chartPosition(
      highlight.candidate_premium_in_domain,
      highlight.automation_probability,
      rows,
      width,
      height,
    );
    const star = svgEl("circle");
    star.setAttribute("cx", String(pos.x));
    star.setAttribute("cy", String(pos.y));
    star.setAttribute("r", "7");
    star.setAttribute("class", "highlight");
    svg.appendChild(star);
  }
  return svg;
}

export interface NeighborhoodData {
  bundle: string[];
  bundleRows: Map<string, SkillRow>;
  neighbors: Map<string, NeighborRow[]>;
  truncated: boolean;
}

/** Union neighborhood of the bundle, truncated to the top edges by weight. */
export function buildNeighborhood(
  bundle: string[],
  perSkill: Map<string, NeighborRow[]>,
  maxNodes = 40,
): { ids: string[]; edges: LayoutEdge[]; rows: Map<string, SkillRow>; truncated: boolean } {
  const rows = new Map<string, SkillRow>();
  const edgeList: LayoutEdge[] = [];
  for (const [source, items] of perSkill) {
    for (const item of items) {
      rows.set(item.skill, item);
      edgeList.push({ source, target: item.skill, weight: item.weight });
    }
  }
  edgeList.sort((a, b) => b.weight - a.weight || a.target.localeCompare(b.target));
  const ids = new Set<string>(bundle);
  const kept: LayoutEdge[] = [];
  let truncated = false;
  for (const edge of edgeList) {
    if (ids.size >= maxNodes && !ids.has(edge.target)) {
      truncated = true;
      continue;
    }
    ids.add(edge.target);
    kept.push(edge);
  }
  return { ids: [...ids], edges: kept, rows, truncated };
}

export function renderNeighborhood(
  bundle: string[],
  perSkill: Map<string, NeighborRow[]>,
  bundleRows: Map<string, SkillRow>,
  onClick: (skill: string) => void,
  width = 460,
  height = 340,
): { svg: SVGElement; truncated: boolean } {
  const { ids, edges, rows, truncated } = buildNeighborhood(bundle, perSkill);
  const layout = forceLayout(ids, edges, width, height);
  const pos = new Map(layout.map((n) => [n.id, n]));
  const svg = svgEl("svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "graph-view");
  const maxWeight = edges.reduce((m, e) => Math.max(m, e.weight), 1);
  for (const edge of edges) {
    const a = pos.get(edge.source);
    const b = pos.get(edge.target);
    if (!a || !b) continue;
    const line = svgEl("line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("stroke-width", String(0.5 + (2.5 * edge.weight) / maxWeight));
    line.setAttribute("class", "edge");
    svg.appendChild(line);
  }
  for (const id of ids) {
    const p = pos.get(id);
    if (!p) continue;
    const row = rows.get(id) ?? bundleRows.get(id);
    const premium = row?.premium ?? 0;
    const group = svgEl("g");
    const dot = svgEl("circle");
    dot.setAttribute("cx", String(p.x));
    dot.setAttribute("cy", String(p.y));
    dot.setAttribute("r", String(bundle.includes(id) ? 9 : 4 + 6 * Math.min(1, Math.abs(premium))));
    dot.setAttribute("fill", row ? communityColor(row.community) : "#888");
    dot.setAttribute("class", bundle.includes(id) ? "node bundle-node" : "node");
    const tooltip = svgEl("title");
    tooltip.textContent = id;
    dot.appendChild(tooltip);
    dot.addEventListener("click", () => onClick(id));
    group.appendChild(dot);
    const label = svgEl("text");
    label.setAttribute("x", String(p.x + 8));
    label.setAttribute("y", String(p.y + 3));
    label.setAttribute("class", "node-label");
    label.textContent = id;
    group.appendChild(label);
    svg.appendChild(group);
  }
  return { svg, truncated };
}
