import { describe, expect, it } from "vitest";

import {
  DEFAULT_STATE,
  parseState,
  serializeState,
  type ViewState,
} from "../src/state";

describe("view state <-> URL", () => {
  it("defaults parse from an empty query", () => {
    expect(parseState("")).toEqual(DEFAULT_STATE);
  });

  it("serializes defaults to an empty query", () => {
    expect(serializeState(DEFAULT_STATE)).toBe("");
  });

  it("round-trips every field", () => {
    const state: ViewState = {
      tab: "channel",
      videoId: "vid-flood",
      sortKey: "views",
      direction: "asc",
      bucket: "month",
      expandedTopic: 3,
      topicPage: 2,
      commentPage: 5,
      topicSortColumn: "sentiment_mean",
      topicSortDesc: false,
    };
    expect(parseState(serializeState(state))).toEqual(state);
  });

  it("round-trips the noise cluster id", () => {
    const state = { ...DEFAULT_STATE, tab: "channel" as const, expandedTopic: -1 };
    expect(parseState(serializeState(state)).expandedTopic).toBe(-1);
  });

  it("ignores unknown or malformed values", () => {
    const state = parseState("tab=bogus&sort=zorch&dir=sideways&topic=abc&cpage=-2");
    expect(state).toEqual(DEFAULT_STATE);
  });

  it("random states survive a round-trip", () => {
    const tabs = ["video", "channel"] as const;
    const sorts = ["chronological", "alphabetical", "views", "likes", "comments"] as const;
    const buckets = ["day", "week", "month"] as const;
    const columns = ["label", "share_pct", "sentiment_mean", "sentiment_variance"] as const;
    let seed = 123456789;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };
    const pick = <T,>(xs: readonly T[]): T => xs[Math.floor(rand() * xs.length)];
    for (let i = 0; i < 200; i++) {
      const state: ViewState = {
        tab: pick(tabs),
        videoId: rand() < 0.3 ? null : `vid-${Math.floor(rand() * 50)}`,
        sortKey: pick(sorts),
        direction: rand() < 0.5 ? "asc" : "desc",
        bucket: pick(buckets),
        expandedTopic: rand() < 0.4 ? null : Math.floor(rand() * 20) - 1,
        topicPage: 1 + Math.floor(rand() * 9),
        commentPage: 1 + Math.floor(rand() * 9),
        topicSortColumn: pick(columns),
        topicSortDesc: rand() < 0.5,
      };
      expect(parseState(serializeState(state))).toEqual(state);
    }
  });
});
