/** Explorer entry point: wires the bundle builder, what-if panel, and
 * neighborhood view to the API. All numbers shown come from the API; the
 * client never recomputes premia or scores.
 */

import { ApiClient, ApiError, SequenceGate } from "./api";
import { thresholdsFrom, type QuadrantThresholds } from "./quadrant";
import {
  communityBadge,
  el,
  renderNeighborhood,
  renderQuadrantChart,
  renderWhatIfPanel,
} from "./render";
import { BundleSession, decodeBundle, encodeBundle } from "./session";
import { rankMatches } from "./typeahead";
import type { NeighborRow, SkillRow, WhatIfResult } from "./types";

const api = new ApiClient("");
const session = new BundleSession();
const gate = new SequenceGate();

let allSkills: SkillRow[] = [];
let skillIndex = new Map<string, SkillRow>();
let communityLabels = new Map<number, string>();
let thresholds: QuadrantThresholds | null = null;
let lastWhatIf: WhatIfResult | null = null;

function $(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function setBanner(message: string | null): void {
  const banner = $("banner");
  banner.textContent = message ?? "";
  banner.style.display = message ? "block" : "none";
}

function domainLabel(domain: number | null): string {
  if (domain === null) return "unknown";
  return communityLabels.get(domain) ?? `community-${domain}`;
}

function syncHash(): void {
  window.location.hash = encodeBundle(session.getBundle());
}

function renderBundle(): void {
  const holder = $("bundle-chips");
  holder.replaceChildren();
  for (const slug of session.getBundle()) {
    const chip = el("span", "chip", slug);
    const row = skillIndex.get(slug);
    if (row) chip.style.borderColor = "#666";
    const close = el("button", "chip-remove", "x");
    close.addEventListener("click", () => {
      session.remove(slug);
      onBundleChange();
    });
    chip.appendChild(close);
    holder.appendChild(chip);
  }
  const summary = session.summary();
  const badgeHolder = $("domain-badge");
  badgeHolder.replaceChildren();
  if (summary.inferredDomain !== null && summary.size > 0) {
    badgeHolder.appendChild(
      communityBadge(domainLabel(summary.inferredDomain), summary.inferredDomain),
    );
  }
  $("bundle-count").textContent = `${summary.size} skill${summary.size === 1 ? "" : "s"}`;
  const hint = $("whatif-hint");
  hint.style.display = summary.size === 0 ? "block" : "none";
}

async function refreshDomain(): Promise<void> {
  const bundle = session.getBundle();
  if (bundle.length === 0) {
    session.setDomain(null);
    return;
  }
  // recommend(k=1) reports the inferred domain for the current bundle
  const seq = gate.next();
  try {
    const res = await api.recommend(bundle, 1);
    if (!gate.accept(seq)) return;
    if (res.results.length > 0) session.setDomain(res.results[0].inferred_domain);
  } catch (err) {
    if (err instanceof ApiError && err.status === 0) {
      setBanner("API unreachable - retry in a moment");
    }
  }
}

async function renderNeighborhoodView(): Promise<void> {
  const bundle = session.getBundle();
  const holder = $("graph-holder");
  if (bundle.length === 0) {
    holder.replaceChildren(el("p", "hint", "add skills to see their neighborhood"));
    return;
  }
  const perSkill = new Map<string, NeighborRow[]>();
  const bundleRows = new Map<string, SkillRow>();
  for (const slug of bundle) {
    try {
      const res = await api.neighbors(slug, 8);
      perSkill.set(slug, res.neighbors);
      const row = skillIndex.get(slug);
      if (row) bundleRows.set(slug, row);
    } catch {
      // missing neighbors for one slug should not break the whole view
    }
  }
  const { svg, truncated } = renderNeighborhood(bundle, perSkill, bundleRows, (skill) => {
    void runWhatIf(skill);
  });
  holder.replaceChildren(svg);
  if (truncated) {
    holder.appendChild(el("p", "hint", "large neighborhood truncated to the strongest links"));
  }
}

async function runWhatIf(candidate: string): Promise<void> {
  const bundle = session.getBundle();
  if (bundle.length === 0) return;
  setBanner(null);
  const panel = $("whatif-panel");
  try {
    const result = await api.whatif(bundle, candidate);
    lastWhatIf = result;
    session.recordWhatIf(result);
    session.setDomain(result.inferred_domain);
    panel.replaceChildren();
    if (thresholds) {
      panel.appendChild(renderWhatIfPanel(result, thresholds, domainLabel(result.inferred_domain)));
      panel.appendChild(renderQuadrantChart(allSkills, result, thresholds));
    }
    const applyBtn = el("button", "apply", `add ${candidate} to bundle`);
    applyBtn.addEventListener("click", () => {
      if (lastWhatIf) {
        session.apply(lastWhatIf);
        onBundleChange();
      }
    });
    if (!result.no_op) panel.appendChild(applyBtn);
    renderBundle();
  } catch (err) {
    if (err instanceof ApiError) {
      const note = el("p", "error", err.message);
      if (err.suggestions.length) {
        note.textContent += ` - did you mean: ${err.suggestions.join(", ")}?`;
      }
      panel.replaceChildren(note);
    }
  }
}

function onBundleChange(): void {
  syncHash();
  renderBundle();
  void refreshDomain().then(renderBundle);
  void renderNeighborhoodView();
}

function wireTypeahead(): void {
  const input = $("skill-input") as HTMLInputElement;
  const list = $("typeahead-list");
  const refresh = () => {
    const matches = rankMatches(input.value, allSkills);
    list.replaceChildren();
    for (const row of matches) {
      const item = el("li", "typeahead-item");
      item.appendChild(el("span", "slug", row.skill));
      item.appendChild(communityBadge(row.community_label, row.community));
      item.addEventListener("click", () => {
        if (session.has(row.skill)) {
          void runWhatIf(row.skill); // re-query flagged as no-op
        } else if (session.getBundle().length === 0) {
          session.add(row.skill);
          onBundleChange();
        } else {
          void runWhatIf(row.skill);
        }
        input.value = "";
        list.replaceChildren();
      });
      list.appendChild(item);
    }
  };
  input.addEventListener("input", refresh);
}

async function init(): Promise<void> {
  try {
    const [skillsRes, communitiesRes, metaRes] = await Promise.all([
      api.skills({ limit: 100000, sort: "skill" }),
      api.communities(),
      api.meta(),
    ]);
    allSkills = skillsRes.skills;
    skillIndex = new Map(allSkills.map((r) => [r.skill, r]));
    communityLabels = new Map(communitiesRes.communities.map((c) => [c.community, c.label]));
    try {
      thresholds = thresholdsFrom(allSkills);
    } catch {
      thresholds = null; // artifact built without automation data
    }
    $("meta-line").textContent =
      `${metaRes.counts.skills} skills / ${metaRes.counts.projects} projects - built ${metaRes.build_timestamp}`;
    for (const slug of decodeBundle(window.location.hash)) {
      if (skillIndex.has(slug)) session.add(slug);
    }
    wireTypeahead();
    onBundleChange();
    setBanner(null);
  } catch (err) {
    setBanner("API unreachable - retry in a moment");
    setTimeout(() => void init(), 3000);
  }
}

void init();
