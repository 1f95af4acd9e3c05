// Wire types for the session service JSON API.

export interface Span {
  start: number;
  end: number;
}

export type Inference = "explicit" | "implicit" | "ambiguous" | "default";

export interface AttributeRef {
  attribute: string;
  candidates: string[];
  inference: Inference;
  spans: Span[];
}

export interface TaskRef {
  kind: "filter" | "aggregate" | "correlation" | "distribution" | "trend" | "extremum";
  attribute: string | null;
  operator: string | null;
  operands: unknown[];
  aggFn: string | null;
  inference: Inference;
  spans: Span[];
}

export interface EncodingIntent {
  markRequest: string;
  explicit: boolean;
  spans: Span[];
}

export interface Interpretation {
  query: string;
  attributeRefs: AttributeRef[];
  tasks: TaskRef[];
  encodingIntent: EncodingIntent;
  unparsedKeywords: Span[];
}

// Vega-Lite subset emitted by the server; rendered verbatim.
export interface ChartSpec {
  data: { name: string };
  transform: { filter: unknown }[];
  mark: string;
  encoding: Record<string, { field?: string; type: string; aggregate?: string; bin?: unknown }>;
}

export interface SampleRow {
  id: number | string;
  values: unknown[];
  status: "kept" | "removed" | "merged-into-group";
}

export interface Cue {
  kind: "HighlightColumn" | "StrikeRow" | "MergeCells" | "LinkToMark";
  target: unknown;
}

export interface TraceStep {
  op: "Load" | "Filter" | "Bin" | "GroupAggregate" | "Encode";
  descriptor: string;
  inputCount: number;
  outputCount: number;
  sample: { columns: string[]; rows: SampleRow[] };
  cues: Cue[];
}

export interface Trace {
  keyAttribute: string;
  relevantColumns: string[];
  sampleRowIds: number[];
  skippedConstraints: string[];
  steps: TraceStep[];
}

export interface Hint {
  kind: string;
  message: string;
  spans: Span[];
  suggestions: string[];
  examples: { text: string }[];
}

export interface QueryResponse {
  interp: Interpretation;
  spec: ChartSpec;
  trace: Trace;
  hints: Hint[];
}

export interface Examples {
  valid: { text: string }[];
  recommended: { text: string } | null;
}

export interface AdjustResponse {
  spec: ChartSpec;
  trace: Trace;
  hints: Hint[];
  examples: Examples;
}

export type Adjustment =
  | { kind: "AddFilter"; field: string; operator: string; operands: unknown[] }
  | { kind: "ModifyFilter"; index: number; operator?: string; operands?: unknown[] }
  | { kind: "RemoveFilter"; index: number }
  | { kind: "AddAttribute"; field: string }
  | { kind: "RemoveAttribute"; field: string }
  | { kind: "ChangeAggregate"; channel: string; aggFn: string }
  | { kind: "ChangeMark"; mark: string }
  | { kind: "SwapChannels"; a: string; b: string }
  | { kind: "ResolveAmbiguity"; token: string; field: string };

export interface DatasetInfo {
  id: string;
  name: string;
  rowCount: number;
}

export interface AttributeOverview {
  name: string;
  kind: string;
  typicalValues: unknown[];
  distinctCount: number;
}

export interface Overview {
  name: string;
  attributes: AttributeOverview[];
  rowCount: number;
}

export type DisplayMode = "NoExplanation" | "OverviewExplanation" | "DetailedExplanation";
