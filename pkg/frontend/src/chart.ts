// Chart panel: hand the server's spec to a stock Vega-Lite renderer verbatim.
// The named data source is bound afterwards through the Vega view API, so the
// spec object itself is never modified.

import type { ChartSpec } from "./types.js";

export interface ViewLike {
  insert(name: string, rows: unknown[]): ViewLike;
  runAsync(): Promise<unknown>;
  addEventListener?(type: string, handler: (event: unknown, item: unknown) => void): void;
}

export type EmbedFn = (
  el: HTMLElement,
  spec: ChartSpec,
  options: { actions: boolean },
) => Promise<{ view: ViewLike }>;

async function defaultEmbed(
  el: HTMLElement,
  spec: ChartSpec,
  options: { actions: boolean },
): Promise<{ view: ViewLike }> {
  const mod = await import("vega-embed");
  return mod.default(el, spec as never, options) as unknown as Promise<{ view: ViewLike }>;
}

export async function renderChart(
  el: HTMLElement,
  spec: ChartSpec,
  rows: Record<string, unknown>[],
  embed: EmbedFn = defaultEmbed,
): Promise<ViewLike> {
  const result = await embed(el, spec, { actions: false });
  const view = result.view.insert(spec.data.name, rows);
  await view.runAsync();
  return view;
}
