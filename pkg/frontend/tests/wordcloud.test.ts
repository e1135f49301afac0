import { describe, expect, it } from "vitest";

import { sentimentColor } from "../src/color";
import { anyOverlap, layoutWordcloud } from "../src/wordcloud";
import type { TermEntry } from "../src/types";

function terms(n: number): TermEntry[] {
  const out: TermEntry[] = [];
  for (let i = 0; i < n; i++) {
    out.push({
      term: `word${i}`,
      frequency: 1 + ((i * 37) % 90),
      mean_sentiment: ((i % 21) - 10) / 10,
    });
  }
  return out;
}

describe("word cloud layout", () => {
  it("is deterministic for the same term list", () => {
    const input = terms(60);
    const a = layoutWordcloud(input);
    const b = layoutWordcloud(input);
    expect(a).toEqual(b);
  });

  it("changes when the term list changes", () => {
    const a = layoutWordcloud(terms(40));
    const shifted = terms(40).map((t) => ({ ...t, frequency: t.frequency + 1 }));
    const b = layoutWordcloud(shifted);
    expect(a).not.toEqual(b);
  });

  it("never overlaps placed terms", () => {
    const placed = layoutWordcloud(terms(80));
    expect(placed.length).toBeGreaterThan(20);
    expect(anyOverlap(placed)).toBe(false);
  });

  it("sizes by frequency", () => {
    const placed = layoutWordcloud([
      { term: "big", frequency: 100, mean_sentiment: 0 },
      { term: "small", frequency: 1, mean_sentiment: 0 },
    ]);
    const big = placed.find((p) => p.term === "big")!;
    const small = placed.find((p) => p.term === "small")!;
    expect(big.fontSize).toBeGreaterThan(small.fontSize);
  });

  it("handles empty and single-term inputs", () => {
    expect(layoutWordcloud([])).toEqual([]);
    const one = layoutWordcloud([{ term: "only", frequency: 5, mean_sentiment: 0.5 }]);
    expect(one).toHaveLength(1);
  });
});

describe("sentiment color scale", () => {
  it("hits red, gray, green at the anchors", () => {
    expect(sentimentColor(-1)).toBe("rgb(211, 47, 47)");
    expect(sentimentColor(0)).toBe("rgb(117, 117, 117)");
    expect(sentimentColor(1)).toBe("rgb(46, 125, 50)");
  });

  it("interpolates monotonically toward green", () => {
    const green = (v: number) =>
      parseInt(sentimentColor(v).match(/rgb\(\d+, (\d+),/)![1], 10);
    expect(green(0.2)).toBeLessThan(green(0.8));
  });

  it("clamps out-of-range values", () => {
    expect(sentimentColor(-5)).toBe(sentimentColor(-1));
    expect(sentimentColor(5)).toBe(sentimentColor(1));
  });
});
