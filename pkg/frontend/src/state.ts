// View state <-> URL query string. Every interactive choice lives in the
// URL so reloading or sharing a link reproduces the view exactly.

import type { Bucket, Direction, SortKey } from "./types";

export type TopicSortColumn =
  | "label"
  | "share_pct"
  | "sentiment_mean"
  | "sentiment_variance";

export interface ViewState {
  tab: "video" | "channel";
  videoId: string | null;
  sortKey: SortKey;
  direction: Direction;
  bucket: Bucket;
  expandedTopic: number | null;
  topicPage: number;
  commentPage: number;
  topicSortColumn: TopicSortColumn;
  topicSortDesc: boolean;
}

export const DEFAULT_STATE: ViewState = {
  tab: "video",
  videoId: null,
  sortKey: "chronological",
  direction: "desc",
  bucket: "week",
  expandedTopic: null,
  topicPage: 1,
  commentPage: 1,
  topicSortColumn: "share_pct",
  topicSortDesc: true,
};

const SORT_KEYS: SortKey[] = [
  "chronological",
  "alphabetical",
  "views",
  "likes",
  "comments",
];
const BUCKETS: Bucket[] = ["day", "week", "month"];
const TOPIC_COLUMNS: TopicSortColumn[] = [
  "label",
  "share_pct",
  "sentiment_mean",
  "sentiment_variance",
];

export function parseState(query: string): ViewState {
  const params = new URLSearchParams(query);
  const state: ViewState = { ...DEFAULT_STATE };
  if (params.get("tab") === "channel") state.tab = "channel";
  const video = params.get("video");
  if (video) state.videoId = video;
  const sort = params.get("sort") as SortKey | null;
  if (sort && SORT_KEYS.includes(sort)) state.sortKey = sort;
  const dir = params.get("dir");
  if (dir === "asc" || dir === "desc") state.direction = dir;
  const bucket = params.get("bucket") as Bucket | null;
  if (bucket && BUCKETS.includes(bucket)) state.bucket = bucket;
  const topic = params.get("topic");
  if (topic !== null && /^-?\d+$/.test(topic)) {
    state.expandedTopic = parseInt(topic, 10);
  }
  const tpage = params.get("tpage");
  if (tpage && /^\d+$/.test(tpage)) state.topicPage = Math.max(1, +tpage);
  const cpage = params.get("cpage");
  if (cpage && /^\d+$/.test(cpage)) state.commentPage = Math.max(1, +cpage);
  const tsort = params.get("tsort") as TopicSortColumn | null;
  if (tsort && TOPIC_COLUMNS.includes(tsort)) state.topicSortColumn = tsort;
  const tdir = params.get("tdir");
  if (tdir === "asc") state.topicSortDesc = false;
  return state;
}

export function serializeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.tab !== DEFAULT_STATE.tab) params.set("tab", state.tab);
  if (state.videoId) params.set("video", state.videoId);
  if (state.sortKey !== DEFAULT_STATE.sortKey) params.set("sort", state.sortKey);
  if (state.direction !== DEFAULT_STATE.direction) {
    params.set("dir", state.direction);
  }
  if (state.bucket !== DEFAULT_STATE.bucket) params.set("bucket", state.bucket);
  if (state.expandedTopic !== null) {
    params.set("topic", String(state.expandedTopic));
  }
  if (state.topicPage !== 1) params.set("tpage", String(state.topicPage));
  if (state.commentPage !== 1) params.set("cpage", String(state.commentPage));
  if (state.topicSortColumn !== DEFAULT_STATE.topicSortColumn) {
    params.set("tsort", state.topicSortColumn);
  }
  if (!state.topicSortDesc) params.set("tdir", "asc");
  return params.toString();
}
