/** Per-level proficiency bars and the optional search-trace rendering. */

import type { StateSnapshot, TraceNode } from "../api";
import { LEVELS } from "../state";

export class ProgressView {
  readonly root: HTMLElement;
  private bars: HTMLElement;
  private tracePane: HTMLElement;

  constructor(showTrace: boolean) {
    this.root = document.createElement("aside");
    this.root.id = "progress";
    this.root.className = "panel";
    const heading = document.createElement("h2");
    heading.textContent = "Progress";
    this.bars = document.createElement("div");
    this.bars.id = "levels";
    this.tracePane = document.createElement("div");
    this.tracePane.id = "trace";
    this.tracePane.classList.toggle("hidden", !showTrace);
    const traceHeading = document.createElement("h3");
    traceHeading.textContent = "Strategy search trace";
    this.tracePane.append(traceHeading);
    this.root.append(heading, this.bars, this.tracePane);
  }

  renderState(state: StateSnapshot): void {
    this.bars.replaceChildren();
    const current = state.model.current_level;
    for (const level of LEVELS) {
      const block = document.createElement("section");
      block.className = "level";
      block.dataset.level = level;
      block.classList.toggle("current", level === current);
      const title = document.createElement("h4");
      title.textContent = level;
      block.append(title);
      for (const vertex of state.model.vertices.filter((v) => v.level === level)) {
        const row = document.createElement("div");
        row.className = "goal-row";
        row.title = state.descriptions[vertex.id] ?? vertex.id;
        const bar = document.createElement("div");
        bar.className = "bar";
        const fill = document.createElement("div");
        fill.className = "fill";
        fill.style.width = `${Math.round(vertex.proficiency * 100)}%`;
        fill.dataset.proficiency = vertex.proficiency.toFixed(2);
        bar.append(fill);
        const label = document.createElement("small");
        label.textContent = `${(state.descriptions[vertex.id] ?? vertex.id).slice(0, 48)} — ${vertex.proficiency.toFixed(2)}`;
        row.append(bar, label);
        block.append(row);
      }
      this.bars.append(block);
    }
  }

  renderTrace(nodes: TraceNode[]): void {
    const existing = this.tracePane.querySelector("svg");
    existing?.remove();
    if (nodes.length === 0) return;

    const depth = new Map<string, number>();
    const byId = new Map(nodes.map((n) => [n.id, n]));
    const depthOf = (node: TraceNode): number => {
      if (depth.has(node.id)) return depth.get(node.id)!;
      const d = node.parent === null ? 0 : depthOf(byId.get(node.parent)!) + 1;
      depth.set(node.id, d);
      return d;
    };
    nodes.forEach(depthOf);

    const perDepth = new Map<number, number>();
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "0 0 400 240");
    svg.setAttribute("role", "img");
    for (const node of nodes) {
      const d = depth.get(node.id)!;
      const slot = perDepth.get(d) ?? 0;
      perDepth.set(d, slot + 1);
      const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      circle.setAttribute("cx", String(40 + d * 90));
      circle.setAttribute("cy", String(24 + slot * 26));
      circle.setAttribute("r", String(5 + Math.min(10, node.N * 2)));  // sized by visit count
      const hue = Math.round(node.U * 120); // red (0) to green (1)
      circle.setAttribute("fill", `hsl(${hue}, 70%, 50%)`);
      circle.dataset.nodeId = node.id;
      circle.dataset.visits = String(node.N);
      circle.dataset.value = node.U.toFixed(3);
      if (node.terminal) circle.setAttribute("stroke", "#333");
      const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
      title.textContent = `${node.action || "root"} U=${node.U.toFixed(2)} N=${node.N}${node.reflection ? `\n${node.reflection}` : ""}`;
      circle.append(title);
      svg.append(circle);
    }
    this.tracePane.append(svg);
  }

  traceNodeCount(): number {
    return this.tracePane.querySelectorAll("circle").length;
  }
}
