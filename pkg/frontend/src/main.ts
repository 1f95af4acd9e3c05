import { Client } from "./api.js";
import { App, AppElements } from "./app.js";
import "./style.css";

function grab<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const els: AppElements = {
  overview: grab("overview"),
  queryInput: grab<HTMLInputElement>("query-input"),
  queryButton: grab<HTMLButtonElement>("query-button"),
  queryBox: grab("query-box"),
  chart: grab("chart"),
  explanation: grab("explanation"),
  hints: grab("hints"),
  status: grab("status"),
  modeSelect: grab<HTMLSelectElement>("mode-select"),
};

const base = import.meta.env.VITE_API_BASE ?? "http://localhost:8080";
const app = new App(new Client(base), els);
void app.init().catch((error) => {
  els.status.textContent = `failed to start: ${String(error)}`;
});
