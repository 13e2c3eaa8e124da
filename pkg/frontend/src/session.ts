/** Bundle session state: the user's skill set, its inferred domain, and an
 * append-only history of actions. Replaying a history reproduces the exact
 * final state, which is what the session tests pin down.
 */

import type { WhatIfResult } from "./types";

export type SessionAction =
  | { kind: "add"; skill: string }
  | { kind: "remove"; skill: string }
  | { kind: "whatif"; result: WhatIfResult }
  | { kind: "apply"; result: WhatIfResult };

export interface BundleSummary {
  bundle: string[];
  size: number;
  inferredDomain: number | null;
  lastWhatIf: WhatIfResult | null;
}

export class BundleSession {
  private bundle: string[] = [];
  private domain: number | null = null;
  private lastResult: WhatIfResult | null = null;
  readonly history: SessionAction[] = [];

  getBundle(): string[] {
    return [...this.bundle];
  }

  has(skill: string): boolean {
    return this.bundle.includes(skill);
  }

  /** Deduplicated append; returns false when the skill was already present. */
  add(skill: string): boolean {
    if (this.bundle.includes(skill)) return false;
    this.bundle.push(skill);
    this.history.push({ kind: "add", skill });
    return true;
  }

  remove(skill: string): boolean {
    const idx = this.bundle.indexOf(skill);
    if (idx < 0) return false;
    this.bundle.splice(idx, 1);
    this.history.push({ kind: "remove", skill });
    return true;
  }

  /** Record the domain reported by the API for the current bundle. */
  setDomain(domain: number | null): void {
    this.domain = domain;
  }

  recordWhatIf(result: WhatIfResult): void {
    this.lastResult = result;
    this.history.push({ kind: "whatif", result });
  }

  /** Commit a what-if candidate into the bundle. */
  apply(result: WhatIfResult): boolean {
    if (this.bundle.includes(result.candidate)) return false;
    this.bundle.push(result.candidate);
    this.lastResult = result;
    this.domain = result.inferred_domain;
    this.history.push({ kind: "apply", result });
    return true;
  }

  summary(): BundleSummary {
    return {
      bundle: [...this.bundle],
      size: this.bundle.length,
      inferredDomain: this.domain,
      lastWhatIf: this.lastResult,
    };
  }
}

/** Rebuild a session purely from a recorded history. */
export function replay(history: SessionAction[]): BundleSession {
  const session = new BundleSession();
  for (const action of history) {
    switch (action.kind) {
      case "add":
        session.add(action.skill);
        break;
      case "remove":
        session.remove(action.skill);
        break;
      case "whatif":
        session.recordWhatIf(action.result);
        session.setDomain(action.result.inferred_domain);
        break;
      case "apply":
        session.apply(action.result);
        break;
    }
  }
  return session;
}

/** Bundle <-> URL fragment, the only client-side persistence. */
export function encodeBundle(bundle: string[]): string {
  return bundle.map(encodeURIComponent).join(",");
}

export function decodeBundle(fragment: string): string[] {
  const clean = fragment.replace(/^#/, "");
  if (!clean) return [];
  const seen = new Set<string>();
  const out: string[] = [];
  for (const part of clean.split(",")) {
    const slug = decodeURIComponent(part.trim());
    if (slug && !seen.has(slug)) {
      seen.add(slug);
      out.push(slug);
    }
  }
  return out;
}
