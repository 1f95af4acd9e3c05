// End-to-end contract test against the real session service: the query box
// highlights exactly the server-provided spans, widget interactions emit
// schema-valid Adjustment JSON (verified through the server log), and the
// chart panel receives the served spec verbatim.

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Client } from "../src/api.js";
import { App, AppElements } from "../src/app.js";
import { roleSpans } from "../src/highlight.js";
import type { ChartSpec, Interpretation } from "../src/types.js";
import { ViewLike } from "../src/chart.js";

const PORT = 18734;
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;

async function until(check: () => boolean | Promise<boolean>, ms = 30000): Promise<void> {
  const started = Date.now();
  for (;;) {
    if (await check()) return;
    if (Date.now() - started > ms) throw new Error("timeout waiting for condition");
    await new Promise((resolve) => setTimeout(resolve, 50));
  }
}

async function serviceReady(): Promise<boolean> {
  try {
    const response = await fetch(`${BASE}/datasets`);
    return response.ok;
  } catch {
    return false;
  }
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), "xnli-e2e-"));
  service = spawn(
    "python3",
    ["-c", `from xnli.service import serve; serve(port=${PORT}, data_dir=${JSON.stringify(dataDir)})`],
    { stdio: "ignore" },
  );
  await until(serviceReady);
});

afterAll(() => {
  service?.kill();
});

function scaffold(): AppElements {
  document.body.innerHTML = `
    <div id="overview"></div>
    <input id="query-input" />
    <button id="query-button"></button>
    <div id="query-box"></div>
    <div id="chart"></div>
    <div id="explanation"></div>
    <div id="hints"></div>
    <div id="status"></div>
    <select id="mode-select">
      <option value="NoExplanation">n</option>
      <option value="OverviewExplanation" selected>o</option>
      <option value="DetailedExplanation">d</option>
    </select>`;
  const grab = (id: string) => document.getElementById(id) as HTMLElement;
  return {
    overview: grab("overview"),
    queryInput: grab("query-input") as HTMLInputElement,
    queryButton: grab("query-button") as HTMLButtonElement,
    queryBox: grab("query-box"),
    chart: grab("chart"),
    explanation: grab("explanation"),
    hints: grab("hints"),
    status: grab("status"),
    modeSelect: grab("mode-select") as HTMLSelectElement,
  };
}

function recordingEmbed(embeds: ChartSpec[]) {
  const view: ViewLike = {
    insert: () => view,
    runAsync: () => Promise.resolve(undefined),
  };
  return (_el: HTMLElement, spec: ChartSpec) => {
    embeds.push(JSON.parse(JSON.stringify(spec)) as ChartSpec);
    return Promise.resolve({ view });
  };
}

function renderedHighlights(box: HTMLElement): { start: number; end: number }[] {
  return [...box.querySelectorAll<HTMLElement>("span.kw")].map((node) => ({
    start: Number(node.dataset.start),
    end: Number(node.dataset.end),
  }));
}

function assertHighlightsMatchServer(box: HTMLElement, interp: Interpretation): void {
  const rendered = renderedHighlights(box);
  const server = roleSpans(interp);
  // Every highlighted segment lies inside some server span...
  for (const segment of rendered) {
    expect(
      server.some((s) => s.start <= segment.start && segment.end <= s.end),
      `segment ${JSON.stringify(segment)} has no server span`,
    ).toBe(true);
  }
  // ...and every server span is fully covered by highlighted segments.
  for (const span of server) {
    for (let at = span.start; at < span.end; ) {
      const covering = rendered.find((seg) => seg.start <= at && at < seg.end);
      expect(covering, `offset ${at} of ${JSON.stringify(span)} not highlighted`).toBeTruthy();
      at = covering!.end;
    }
  }
  // Plain segments never intersect a server span.
  for (const node of box.querySelectorAll<HTMLElement>("span.plain")) {
    const start = Number(node.dataset.start);
    const end = Number(node.dataset.end);
    expect(server.some((s) => s.start < end && start < s.end)).toBe(false);
  }
}

describe("scenario 2 against the live service", () => {
  it("highlights server spans, posts schema adjustments, renders specs verbatim", async () => {
    const els = scaffold();
    const embeds: ChartSpec[] = [];
    const client = new Client(BASE);
    const app = new App(client, els, recordingEmbed(embeds));
    await app.init();

    // Step 1: ambiguous query with an unrecognized synonym.
    const first = await app.submitQuery("show the rating and box office");
    expect(first).toBeTruthy();
    assertHighlightsMatchServer(els.queryBox, first!.interp);
    const hintKinds = first!.hints.map((h) => h.kind);
    expect(hintKinds).toContain("AttributeAmbiguity");
    expect(hintKinds).toContain("UnusedKeyword");
    expect(embeds.length).toBe(1);
    expect(JSON.stringify(embeds[0])).toBe(JSON.stringify(first!.spec));

    // Step 2: resolve the ambiguity through the widget select.
    const select = els.explanation.querySelector<HTMLSelectElement>(".ambiguity-select");
    expect(select).toBeTruthy();
    select!.value = "IMDB Rating";
    select!.dispatchEvent(new Event("change"));
    await until(() => els.status.textContent === "adjusted: ResolveAmbiguity");

    // The server received exactly the documented Adjustment JSON.
    const log = await client.log(app.state.sessionId!);
    const adjustments = log.entries
      .filter((e) => e.kind === "Adjustment")
      .map((e) => (e.payload as { request: { adjustment: unknown } }).request.adjustment);
    expect(adjustments).toContainEqual({
      kind: "ResolveAmbiguity",
      token: "rating",
      field: "IMDB Rating",
    });

    // Step 3: the follow-up query honors the learned preference and the
    // over-constrained filter produces the pinned empty-result hint.
    const followUp = await app.submitQuery(
      "show the rating and worldwide gross of super hero movies released after 2009",
    );
    expect(followUp).toBeTruthy();
    expect(followUp!.interp.attributeRefs[0].attribute).toBe("IMDB Rating");
    assertHighlightsMatchServer(els.queryBox, followUp!.interp);
    const empty = followUp!.hints.find((h) => h.kind === "EmptyResult");
    expect(empty?.message).toBe("No records satisfy the filter criteria.");
    expect(els.hints.textContent).toContain("No records satisfy the filter criteria.");

    // Every chart render received the server spec byte-for-byte.
    const lastEmbed = embeds[embeds.length - 1];
    expect(JSON.stringify(lastEmbed)).toBe(JSON.stringify(followUp!.spec));

    // Step 4: a chart-type widget change also posts schema JSON.
    const mark = els.explanation.querySelector<HTMLSelectElement>(".mark-select");
    expect(mark).toBeTruthy();
    mark!.value = "bar";
    mark!.dispatchEvent(new Event("change"));
    await until(() => els.status.textContent === "adjusted: ChangeMark");
    const log2 = await client.log(app.state.sessionId!);
    const marks = log2.entries
      .filter((e) => e.kind === "Adjustment")
      .map((e) => (e.payload as { request: { adjustment: unknown } }).request.adjustment);
    expect(marks).toContainEqual({ kind: "ChangeMark", mark: "bar" });
  });
});
