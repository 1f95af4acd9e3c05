// Three-aspect explanation panel (attributes, tasks, visual encodings) with
// provenance sample tables, plus the data overview and the hint panel.

import type {
  AttributeRef,
  ChartSpec,
  DisplayMode,
  Hint,
  Interpretation,
  Overview,
  Span,
  Trace,
  TraceStep,
} from "./types.js";

export interface ExplanationHandlers {
  onResolveAmbiguity(token: string, field: string): void;
  onRemoveAttribute(field: string): void;
  onHoverSpans(spans: Span[], on: boolean): void;
  onChangeMark(mark: string): void;
  onChangeAggregate(channel: string, aggFn: string): void;
  onModifyFilter(index: number, operator: string, rawOperands: string): void;
  onRemoveFilter(index: number): void;
}

const MARKS = ["bar", "point", "line", "tick", "arc"];
const AGGREGATES = ["mean", "sum", "count", "min", "max", "none"];
const OPERATORS = ["<", "<=", ">", ">=", "=", "!=", "between", "contains"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function tokenOf(query: string, ref: AttributeRef): string {
  const span = ref.spans[0];
  return span ? query.slice(span.start, span.end) : ref.attribute;
}

export function renderOverview(
  root: HTMLElement,
  overview: Overview,
  onFilterIcon: (attribute: string) => void,
): void {
  root.textContent = "";
  root.appendChild(el("h2", "panel-title", `${overview.name} (${overview.rowCount} rows)`));
  const list = el("ul", "attribute-list");
  for (const attribute of overview.attributes) {
    const item = el("li", "attribute-item");
    item.appendChild(el("span", `attr-kind kind-${attribute.kind}`, attribute.kind[0].toUpperCase()));
    item.appendChild(el("span", "attr-name", attribute.name));
    const filter = el("button", "filter-icon", "⊕");
    filter.title = `Add a filter on ${attribute.name}`;
    filter.addEventListener("click", () => onFilterIcon(attribute.name));
    item.appendChild(filter);
    item.appendChild(
      el("div", "attr-typical", `typical: ${attribute.typicalValues.map(String).join(", ")}`),
    );
    list.appendChild(item);
  }
  root.appendChild(list);
}

function renderAttributeAspect(
  root: HTMLElement,
  interp: Interpretation,
  handlers: ExplanationHandlers,
): void {
  const section = el("section", "aspect aspect-attributes");
  section.appendChild(el("h3", "aspect-title", "Attributes"));
  for (const ref of interp.attributeRefs) {
    const uncertain = ref.inference === "implicit" || ref.inference === "ambiguous";
    const chip = el("span", `chip chip-${ref.inference} ${uncertain ? "chip-warn" : "chip-sure"}`);
    chip.dataset.attribute = ref.attribute;
    chip.appendChild(el("span", "chip-label", ref.attribute));
    chip.appendChild(el("small", "chip-inference", ref.inference));
    chip.addEventListener("mouseenter", () => handlers.onHoverSpans(ref.spans, true));
    chip.addEventListener("mouseleave", () => handlers.onHoverSpans(ref.spans, false));

    if (ref.inference === "ambiguous") {
      const select = el("select", "ambiguity-select");
      for (const candidate of ref.candidates) {
        const option = el("option", undefined, candidate);
        option.value = candidate;
        option.selected = candidate === ref.attribute;
        select.appendChild(option);
      }
      const token = tokenOf(interp.query, ref);
      select.addEventListener("change", () =>
        handlers.onResolveAmbiguity(token, select.value),
      );
      chip.appendChild(select);
    }
    const remove = el("button", "chip-remove", "×");
    remove.title = `Remove ${ref.attribute} from the process`;
    remove.addEventListener("click", () => handlers.onRemoveAttribute(ref.attribute));
    chip.appendChild(remove);
    section.appendChild(chip);
  }
  root.appendChild(section);
}

function filterSteps(trace: Trace): TraceStep[] {
  return trace.steps.filter((s) => s.op === "Filter");
}

function renderTaskAspect(
  root: HTMLElement,
  interp: Interpretation,
  trace: Trace,
  handlers: ExplanationHandlers,
): void {
  const section = el("section", "aspect aspect-tasks");
  section.appendChild(el("h3", "aspect-title", "Tasks"));

  const steps = filterSteps(trace);
  steps.forEach((step, index) => {
    const row = el("div", "task-row");
    row.appendChild(el("span", "task-desc", step.descriptor));
    row.appendChild(el("span", "task-counts", `${step.inputCount} → ${step.outputCount}`));
    const spans =
      interp.tasks.find(
        (t) => t.kind === "filter" && step.descriptor.includes(String(t.attribute)),
      )?.spans ?? [];
    row.addEventListener("mouseenter", () => handlers.onHoverSpans(spans, true));
    row.addEventListener("mouseleave", () => handlers.onHoverSpans(spans, false));

    const editor = el("span", "task-editor");
    const operator = el("select", "op-select");
    for (const op of OPERATORS) {
      const option = el("option", undefined, op);
      option.value = op;
      operator.appendChild(option);
    }
    const operands = el("input", "operand-input");
    operands.placeholder = "value (a, b for between)";
    const apply = el("button", "apply-filter", "apply");
    apply.addEventListener("click", () =>
      handlers.onModifyFilter(index, operator.value, operands.value),
    );
    const drop = el("button", "drop-filter", "remove");
    drop.addEventListener("click", () => handlers.onRemoveFilter(index));
    editor.append(operator, operands, apply, drop);
    row.appendChild(editor);
    section.appendChild(row);
  });

  for (const task of interp.tasks) {
    if (task.kind === "filter") continue;
    const row = el("div", "task-row task-secondary");
    const label = task.aggFn ? `${task.kind} (${task.aggFn})` : task.kind;
    row.appendChild(el("span", "task-desc", `${label}${task.attribute ? `: ${task.attribute}` : ""}`));
    row.addEventListener("mouseenter", () => handlers.onHoverSpans(task.spans, true));
    row.addEventListener("mouseleave", () => handlers.onHoverSpans(task.spans, false));
    section.appendChild(row);
  }
  root.appendChild(section);
}

function renderEncodingAspect(
  root: HTMLElement,
  spec: ChartSpec,
  handlers: ExplanationHandlers,
): void {
  const section = el("section", "aspect aspect-encodings");
  section.appendChild(el("h3", "aspect-title", "Visual Encodings"));

  const markRow = el("div", "encoding-row");
  markRow.appendChild(el("span", "encoding-label", "mark"));
  const mark = el("select", "mark-select");
  for (const candidate of MARKS) {
    const option = el("option", undefined, candidate);
    option.value = candidate;
    option.selected = candidate === spec.mark;
    mark.appendChild(option);
  }
  mark.addEventListener("change", () => handlers.onChangeMark(mark.value));
  markRow.appendChild(mark);
  section.appendChild(markRow);

  for (const [channel, encoding] of Object.entries(spec.encoding)) {
    const row = el("div", "encoding-row");
    row.appendChild(el("span", "encoding-label", channel));
    const description = encoding.aggregate
      ? `${encoding.aggregate}(${encoding.field ?? ""})`
      : `${encoding.field ?? ""}${encoding.bin ? " (binned)" : ""}`;
    row.appendChild(el("span", "encoding-field", description));
    const aggregate = el("select", "agg-select");
    for (const fn of AGGREGATES) {
      const option = el("option", undefined, fn);
      option.value = fn;
      option.selected = (encoding.aggregate ?? "none") === fn;
      aggregate.appendChild(option);
    }
    aggregate.addEventListener("change", () =>
      handlers.onChangeAggregate(channel, aggregate.value),
    );
    row.appendChild(aggregate);
    section.appendChild(row);
  }
  root.appendChild(section);
}

function renderSampleTable(step: TraceStep, keyAttribute: string): HTMLElement {
  const highlighted = new Set(
    step.cues.filter((c) => c.kind === "HighlightColumn").map((c) => String(c.target)),
  );
  const struck = new Set(
    step.cues.filter((c) => c.kind === "StrikeRow").map((c) => String(c.target)),
  );
  const merged = step.cues.some((c) => c.kind === "MergeCells");

  const table = el("table", "sample-table");
  const head = el("tr");
  for (const column of step.sample.columns) {
    const cell = el("th", highlighted.has(column) ? "col-relevant" : undefined, column);
    if (column === keyAttribute) cell.classList.add("col-key");
    head.appendChild(cell);
  }
  table.appendChild(head);

  let previous: string[] | null = null;
  for (const row of step.sample.rows) {
    const tr = el("tr", `row-${row.status}`);
    tr.dataset.rowId = String(row.id);
    if (struck.has(String(row.id))) tr.classList.add("row-struck");
    row.values.forEach((value, i) => {
      const text = value === null || value === undefined ? "∅" : String(value);
      const td = el("td", undefined, text);
      const column = step.sample.columns[i];
      if (highlighted.has(column)) td.classList.add("col-relevant");
      if (merged && row.status === "merged-into-group" && previous && previous[i] === text) {
        td.classList.add("cell-merged");
        td.textContent = "〃";
      }
      tr.appendChild(td);
    });
    previous = row.values.map((v) => (v === null || v === undefined ? "∅" : String(v)));
    table.appendChild(tr);
  }
  return table;
}

function renderProvenance(root: HTMLElement, trace: Trace): void {
  const section = el("section", "aspect aspect-provenance");
  section.appendChild(el("h3", "aspect-title", "Data Provenance"));
  for (const skipped of trace.skippedConstraints) {
    section.appendChild(el("div", "provenance-note", `note: ${skipped}`));
  }
  for (const step of trace.steps) {
    const block = el("div", `prov-step prov-${step.op.toLowerCase()}`);
    block.appendChild(
      el("h4", "prov-title", `${step.op} — ${step.descriptor} (${step.inputCount} → ${step.outputCount})`),
    );
    block.appendChild(renderSampleTable(step, trace.keyAttribute));
    section.appendChild(block);
  }
  root.appendChild(section);
}

export function renderExplanations(
  root: HTMLElement,
  interp: Interpretation,
  spec: ChartSpec,
  trace: Trace,
  mode: DisplayMode,
  handlers: ExplanationHandlers,
): void {
  root.textContent = "";
  if (mode === "NoExplanation") {
    root.classList.add("hidden");
    return;
  }
  root.classList.remove("hidden");
  renderAttributeAspect(root, interp, handlers);
  renderTaskAspect(root, interp, trace, handlers);
  renderEncodingAspect(root, spec, handlers);
  if (mode === "DetailedExplanation") {
    renderProvenance(root, trace);
  }
}

export function renderHints(
  root: HTMLElement,
  hints: Hint[],
  examples: { valid: { text: string }[]; recommended: { text: string } | null } | null,
  onUseExample: (text: string) => void,
): void {
  root.textContent = "";
  if (hints.length === 0 && (!examples || examples.valid.length === 0)) {
    root.appendChild(el("div", "hint-empty", "No hints for this result."));
    return;
  }
  for (const hint of hints) {
    const card = el("div", `hint hint-${hint.kind}`);
    card.appendChild(el("strong", "hint-kind", hint.kind));
    card.appendChild(el("p", "hint-message", hint.message));
    if (hint.suggestions.length > 0) {
      card.appendChild(el("p", "hint-suggestions", `try: ${hint.suggestions.join(", ")}`));
    }
    for (const example of hint.examples) {
      const button = el("button", "hint-example", example.text);
      button.addEventListener("click", () => onUseExample(example.text));
      card.appendChild(button);
    }
    root.appendChild(card);
  }
  if (examples && examples.recommended) {
    const card = el("div", "hint hint-recommendation");
    card.appendChild(el("strong", "hint-kind", "Try this query"));
    const button = el("button", "hint-example", examples.recommended.text);
    button.addEventListener("click", () => onUseExample(examples.recommended!.text));
    card.appendChild(button);
    root.appendChild(card);
  }
}
