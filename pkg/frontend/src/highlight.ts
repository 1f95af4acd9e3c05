// Query-box highlighting: split the query into segments styled by the roles
// of the server-provided spans. No client-side reinterpretation happens here;
// only the interpretation's own character offsets drive the styling.

import type { Interpretation, Span } from "./types.js";

export interface RoleSpan extends Span {
  role: string;
}

export interface Segment {
  text: string;
  start: number;
  end: number;
  roles: string[];
}

export function roleSpans(interp: Interpretation): RoleSpan[] {
  const spans: RoleSpan[] = [];
  for (const ref of interp.attributeRefs) {
    for (const span of ref.spans) {
      spans.push({ ...span, role: `attribute-${ref.inference}` });
    }
  }
  for (const task of interp.tasks) {
    for (const span of task.spans) {
      spans.push({ ...span, role: `task-${task.kind}` });
    }
  }
  for (const span of interp.encodingIntent.spans) {
    spans.push({ ...span, role: "encoding" });
  }
  for (const span of interp.unparsedKeywords) {
    spans.push({ ...span, role: "unparsed" });
  }
  return spans;
}

/** Cut the query at every span boundary; segments carry all covering roles. */
export function segments(query: string, interp: Interpretation): Segment[] {
  const spans = roleSpans(interp);
  const cuts = new Set<number>([0, query.length]);
  for (const span of spans) {
    cuts.add(span.start);
    cuts.add(span.end);
  }
  const ordered = [...cuts].sort((a, b) => a - b);
  const out: Segment[] = [];
  for (let i = 0; i + 1 < ordered.length; i++) {
    const start = ordered[i];
    const end = ordered[i + 1];
    if (start >= end) continue;
    const roles = [
      ...new Set(spans.filter((s) => s.start <= start && end <= s.end).map((s) => s.role)),
    ];
    out.push({ text: query.slice(start, end), start, end, roles });
  }
  return out;
}

/** The exact set of highlighted (non-grey) character ranges, merged. */
export function highlightedRanges(query: string, interp: Interpretation): Span[] {
  const merged: Span[] = [];
  for (const segment of segments(query, interp)) {
    if (segment.roles.length === 0) continue;
    const last = merged[merged.length - 1];
    if (last && last.end === segment.start) {
      last.end = segment.end;
    } else {
      merged.push({ start: segment.start, end: segment.end });
    }
  }
  return merged;
}

export function renderQueryBox(el: HTMLElement, query: string, interp: Interpretation): void {
  el.textContent = "";
  for (const segment of segments(query, interp)) {
    const node = document.createElement("span");
    node.textContent = segment.text;
    node.dataset.start = String(segment.start);
    node.dataset.end = String(segment.end);
    if (segment.roles.length > 0) {
      node.className = "kw " + segment.roles.map((r) => `kw-${r}`).join(" ");
    } else {
      node.className = "plain";
    }
    el.appendChild(node);
  }
}

/** Flash the segments overlapping the given spans (task-row hover). */
export function flashSpans(el: HTMLElement, spans: Span[], on: boolean): void {
  for (const node of el.querySelectorAll<HTMLElement>("span[data-start]")) {
    const start = Number(node.dataset.start);
    const end = Number(node.dataset.end);
    const hit = spans.some((s) => s.start < end && start < s.end);
    node.classList.toggle("flash", on && hit);
  }
}
