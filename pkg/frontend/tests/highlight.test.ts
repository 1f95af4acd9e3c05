import { describe, expect, it } from "vitest";

import { flashSpans, highlightedRanges, renderQueryBox, segments } from "../src/highlight.js";
import type { Interpretation } from "../src/types.js";

const query = "show the rating and box office";

const interp: Interpretation = {
  query,
  attributeRefs: [
    {
      attribute: "IMDB Rating",
      candidates: ["IMDB Rating", "Content Rating"],
      inference: "ambiguous",
      spans: [{ start: 9, end: 15 }],
    },
  ],
  tasks: [],
  encodingIntent: { markRequest: "none", explicit: false, spans: [] },
  unparsedKeywords: [{ start: 20, end: 30 }],
};

describe("segments", () => {
  it("covers the whole query in order", () => {
    const segs = segments(query, interp);
    expect(segs.map((s) => s.text).join("")).toBe(query);
    for (let i = 0; i + 1 < segs.length; i++) {
      expect(segs[i].end).toBe(segs[i + 1].start);
    }
  });

  it("assigns roles exactly where the server spans are", () => {
    const segs = segments(query, interp);
    const rating = segs.find((s) => s.text === "rating");
    expect(rating?.roles).toEqual(["attribute-ambiguous"]);
    const box = segs.find((s) => s.text === "box office");
    expect(box?.roles).toEqual(["unparsed"]);
    const show = segs.find((s) => s.text.startsWith("show"));
    expect(show?.roles).toEqual([]);
  });

  it("merged highlighted ranges equal the server span union", () => {
    expect(highlightedRanges(query, interp)).toEqual([
      { start: 9, end: 15 },
      { start: 20, end: 30 },
    ]);
  });
});

describe("renderQueryBox", () => {
  it("emits one element per segment with role classes", () => {
    const el = document.createElement("div");
    renderQueryBox(el, query, interp);
    const nodes = [...el.querySelectorAll("span")];
    expect(nodes.map((n) => n.textContent).join("")).toBe(query);
    const highlighted = nodes.filter((n) => n.classList.contains("kw"));
    expect(highlighted.map((n) => n.textContent)).toEqual(["rating", "box office"]);
    expect(nodes.find((n) => n.textContent === "rating")?.className).toContain(
      "kw-attribute-ambiguous",
    );
  });

  it("flashes exactly the overlapping segments", () => {
    const el = document.createElement("div");
    renderQueryBox(el, query, interp);
    flashSpans(el, [{ start: 9, end: 15 }], true);
    const flashed = [...el.querySelectorAll(".flash")].map((n) => n.textContent);
    expect(flashed).toEqual(["rating"]);
    flashSpans(el, [{ start: 9, end: 15 }], false);
    expect(el.querySelectorAll(".flash").length).toBe(0);
  });
});
