/** Minimal deterministic force-directed layout for the neighborhood view.
 *
 * Spring forces along edges, pairwise repulsion, and centering, run for a
 * fixed number of iterations from hash-seeded positions so the same
 * subgraph always lays out the same way.
 */

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
}

export interface LayoutEdge {
  source: string;
  target: string;
  weight: number;
}

function hash01(text: string, salt: number): number {
  let h = 2166136261 ^ salt;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return ((h >>> 0) % 100000) / 100000;
}

export function forceLayout(
  ids: string[],
  edges: LayoutEdge[],
  width: number,
  height: number,
  iterations = 150,
): LayoutNode[] {
  const n = ids.length;
  if (n === 0) return [];
  const nodes: LayoutNode[] = ids.map((id) => ({
    id,
    x: width * (0.2 + 0.6 * hash01(id, 1)),
    y: height * (0.2 + 0.6 * hash01(id, 2)),
  }));
  const index = new Map(ids.map((id, i) => [id, i]));
  const maxWeight = edges.reduce((m, e) => Math.max(m, e.weight), 1);
  const area = width * height;
  const k = Math.sqrt(area / n);

  for (let it = 0; it < iterations; it++) {
    const temp = 0.1 * Math.min(width, height) * (1 - it / iterations) + 1;
    const dx = new Array(n).fill(0);
    const dy = new Array(n).fill(0);
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let vx = nodes[i].x - nodes[j].x;
        let vy = nodes[i].y - nodes[j].y;
        let dist = Math.sqrt(vx * vx + vy * vy);
        if (dist < 0.01) {
          vx = 0.01 * (hash01(ids[i] + ids[j], it) - 0.5);
          vy = 0.01;
          dist = Math.sqrt(vx * vx + vy * vy);
        }
        const rep = (k * k) / dist;
        dx[i] += (vx / dist) * rep;
        dy[i] += (vy / dist) * rep;
        dx[j] -= (vx / dist) * rep;
        dy[j] -= (vy / dist) * rep;
      }
    }
    for (const e of edges) {
      const i = index.get(e.source);
      const j = index.get(e.target);
      if (i === undefined || j === undefined) continue;
      const vx = nodes[i].x - nodes[j].x;
      const vy = nodes[i].y - nodes[j].y;
      const dist = Math.max(Math.sqrt(vx * vx + vy * vy), 0.01);
      const attract = ((dist * dist) / k) * (0.3 + (0.7 * e.weight) / maxWeight);
      dx[i] -= (vx / dist) * attract;
      dy[i] -= (vy / dist) * attract;
      dx[j] += (vx / dist) * attract;
      dy[j] += (vy / dist) * attract;
    }
    const cx = width / 2;
    const cy = height / 2;
    for (let i = 0; i < n; i++) {
      dx[i] += (cx - nodes[i].x) * 0.02;
      dy[i] += (cy - nodes[i].y) * 0.02;
      const len = Math.max(Math.sqrt(dx[i] * dx[i] + dy[i] * dy[i]), 0.01);
      const step = Math.min(len, temp);
      nodes[i].x += (dx[i] / len) * step;
      nodes[i].y += (dy[i] / len) * step;
      nodes[i].x = Math.min(width - 10, Math.max(10, nodes[i].x));
      nodes[i].y = Math.min(height - 10, Math.max(10, nodes[i].y));
    }
  }
  return nodes;
}
