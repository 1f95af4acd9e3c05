// Application wiring: a pure client over the session service. Every visible
// state change originates from a server response; one request is in flight at
// a time and inputs are disabled while it runs.

import { Client } from "./api.js";
import { EmbedFn, renderChart } from "./chart.js";
import { renderExplanations, renderHints, renderOverview } from "./explanation.js";
import { flashSpans, renderQueryBox } from "./highlight.js";
import * as widgets from "./widgets.js";
import type {
  AdjustResponse,
  Adjustment,
  ChartSpec,
  DisplayMode,
  Examples,
  Interpretation,
  QueryResponse,
  Span,
  Trace,
} from "./types.js";

export interface AppElements {
  overview: HTMLElement;
  queryInput: HTMLInputElement;
  queryButton: HTMLButtonElement;
  queryBox: HTMLElement;
  chart: HTMLElement;
  explanation: HTMLElement;
  hints: HTMLElement;
  status: HTMLElement;
  modeSelect: HTMLSelectElement;
}

export interface ViewState {
  sessionId: string | null;
  datasetId: string | null;
  displayMode: DisplayMode;
  lastQuery: string | null;
  lastInterp: Interpretation | null;
  lastSpec: ChartSpec | null;
  lastTrace: Trace | null;
  lastExamples: Examples | null;
  busy: boolean;
}

export class App {
  state: ViewState = {
    sessionId: null,
    datasetId: null,
    displayMode: "OverviewExplanation",
    lastQuery: null,
    lastInterp: null,
    lastSpec: null,
    lastTrace: null,
    lastExamples: null,
    busy: false,
  };
  private rows: Record<string, unknown>[] = [];

  constructor(
    private client: Client,
    private els: AppElements,
    private embed?: EmbedFn,
  ) {
    this.els.queryButton.addEventListener("click", () => {
      void this.submitQuery(this.els.queryInput.value);
    });
    this.els.queryInput.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        void this.submitQuery(this.els.queryInput.value);
      }
    });
    this.els.modeSelect.addEventListener("change", () => {
      this.state.displayMode = this.els.modeSelect.value as DisplayMode;
      this.renderAll();
    });
  }

  async init(): Promise<void> {
    const { datasets } = await this.client.listDatasets();
    const dataset = datasets[0];
    if (!dataset) throw new Error("no datasets available");
    this.state.datasetId = dataset.id;
    const [{ sessionId }, overview, rows] = await Promise.all([
      this.client.createSession(dataset.id),
      this.client.overview(dataset.id),
      this.client.rows(dataset.id),
    ]);
    this.state.sessionId = sessionId;
    this.rows = rows.rows;
    renderOverview(this.els.overview, overview, (attribute) => {
      const adjustment = widgets.addFilter(attribute, ">", "0");
      if (adjustment) void this.adjust(adjustment);
    });
    this.setStatus(`session ready on '${overview.name}'`);
  }

  private setStatus(text: string): void {
    this.els.status.textContent = text;
  }

  private setBusy(busy: boolean): void {
    this.state.busy = busy;
    this.els.queryButton.disabled = busy;
    this.els.queryInput.disabled = busy;
    this.els.explanation.classList.toggle("busy", busy);
  }

  async submitQuery(query: string): Promise<QueryResponse | null> {
    if (this.state.busy || !this.state.sessionId) return null;
    if (!query.trim()) {
      this.setStatus("type a query first");
      return null;
    }
    this.setBusy(true);
    try {
      const response = await this.client.postQuery(this.state.sessionId, query);
      this.state.lastQuery = query;
      this.state.lastInterp = response.interp;
      this.state.lastSpec = response.spec;
      this.state.lastTrace = response.trace;
      this.state.lastExamples = null;
      this.els.queryInput.value = query;
      await this.renderAll(response.hints);
      this.setStatus("ok");
      return response;
    } catch (error) {
      this.setStatus(String(error));
      return null;
    } finally {
      this.setBusy(false);
    }
  }

  async adjust(adjustment: Adjustment): Promise<AdjustResponse | null> {
    if (this.state.busy || !this.state.sessionId) return null;
    this.setBusy(true);
    try {
      const response = await this.client.postAdjustment(this.state.sessionId, adjustment);
      this.state.lastSpec = response.spec;
      this.state.lastTrace = response.trace;
      this.state.lastExamples = response.examples;
      if (adjustment.kind === "ResolveAmbiguity" && this.state.lastInterp) {
        for (const ref of this.state.lastInterp.attributeRefs) {
          if (ref.inference === "ambiguous" && ref.candidates.includes(adjustment.field)) {
            ref.attribute = adjustment.field;
          }
        }
      }
      await this.renderAll(response.hints);
      this.setStatus(`adjusted: ${adjustment.kind}`);
      return response;
    } catch (error) {
      this.setStatus(String(error));
      return null;
    } finally {
      this.setBusy(false);
    }
  }

  private async renderAll(hints: QueryResponse["hints"] = []): Promise<void> {
    const { lastInterp, lastSpec, lastTrace, lastQuery } = this.state;
    if (!lastInterp || !lastSpec || !lastTrace || lastQuery === null) return;

    renderQueryBox(this.els.queryBox, lastQuery, lastInterp);
    renderExplanations(
      this.els.explanation,
      lastInterp,
      lastSpec,
      lastTrace,
      this.state.displayMode,
      {
        onResolveAmbiguity: (token, field) =>
          void this.adjust(widgets.resolveAmbiguity(token, field)),
        onRemoveAttribute: (field) => void this.adjust(widgets.removeAttribute(field)),
        onHoverSpans: (spans: Span[], on: boolean) =>
          flashSpans(this.els.queryBox, spans, on),
        onChangeMark: (mark) => void this.adjust(widgets.changeMark(mark)),
        onChangeAggregate: (channel, aggFn) =>
          void this.adjust(widgets.changeAggregate(channel, aggFn)),
        onModifyFilter: (index, operator, raw) => {
          const adjustment = widgets.modifyFilter(index, operator, raw);
          if (adjustment) {
            void this.adjust(adjustment);
          } else {
            this.setStatus("enter a filter value first");
          }
        },
        onRemoveFilter: (index) => void this.adjust(widgets.removeFilter(index)),
      },
    );
    renderHints(this.els.hints, hints, this.state.lastExamples, (text) => {
      this.els.queryInput.value = text;
      void this.submitQuery(text);
    });
    try {
      await renderChart(this.els.chart, lastSpec, this.rows, this.embed);
    } catch (error) {
      this.setStatus(`chart error: ${String(error)}`);
    }
  }
}
