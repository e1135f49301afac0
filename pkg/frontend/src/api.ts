// Data sources: the live JSON API or an exported static bundle. Both return
// identical payload shapes, so rendering never knows which one it is on.

import type {
  AlertsResponse,
  Bucket,
  ChannelResponse,
  CommentsPage,
  Direction,
  SortKey,
  SuperfansResponse,
  ThemeReportResponse,
  TimeseriesResponse,
  TopicCommentsPage,
  TopicsResponse,
  VideoItem,
  VideosResponse,
  VideoStatsResponse,
  WordcloudResponse,
} from "./types";

export class NotComputedError extends Error {
  constructor(what: string) {
    super(`${what} was not computed for this snapshot`);
  }
}

export class NotFoundError extends Error {}

export interface DataSource {
  readonly mode: "live" | "static";
  channel(): Promise<ChannelResponse>;
  channelReport(kind: "themes" | "suggestions"): Promise<ThemeReportResponse>;
  topics(): Promise<TopicsResponse>;
  topicComments(clusterId: number, page: number): Promise<TopicCommentsPage>;
  alerts(): Promise<AlertsResponse>;
  superfans(): Promise<SuperfansResponse>;
  videos(sort: SortKey, direction: Direction): Promise<VideosResponse>;
  videoStats(videoId: string): Promise<VideoStatsResponse>;
  videoReport(
    videoId: string,
    kind: "themes" | "suggestions",
  ): Promise<ThemeReportResponse>;
  timeseries(videoId: string, bucket: Bucket): Promise<TimeseriesResponse>;
  wordcloud(videoId: string, k: number): Promise<WordcloudResponse>;
  comments(videoId: string, page: number): Promise<CommentsPage>;
}

type Fetcher = typeof fetch;

async function getJson(
  fetcher: Fetcher,
  url: string,
  what: string,
): Promise<any> {
  const resp = await fetcher(url);
  if (resp.status === 409) throw new NotComputedError(what);
  if (resp.status === 404) throw new NotFoundError(`${what}: not found`);
  if (!resp.ok) throw new Error(`${what}: HTTP ${resp.status}`);
  return resp.json();
}

export class LiveSource implements DataSource {
  readonly mode = "live" as const;

  constructor(
    private base: string = "/api",
    private fetcher: Fetcher = fetch.bind(globalThis),
  ) {}

  private get(path: string, what: string): Promise<any> {
    return getJson(this.fetcher, `${this.base}${path}`, what);
  }

  channel() {
    return this.get("/channel", "channel stats");
  }
  channelReport(kind: "themes" | "suggestions") {
    return this.get(`/channel/${kind}`, `channel ${kind}`);
  }
  topics() {
    return this.get("/channel/topics", "topics");
  }
  topicComments(clusterId: number, page: number) {
    return this.get(
      `/channel/topics/${clusterId}/comments?page=${page}&page_size=50`,
      "topic comments",
    );
  }
  alerts() {
    return this.get("/channel/alerts", "alerts");
  }
  superfans() {
    return this.get("/channel/superfans", "superfans");
  }
  videos(sort: SortKey, direction: Direction) {
    return this.get(`/videos?sort=${sort}&direction=${direction}`, "videos");
  }
  videoStats(videoId: string) {
    return this.get(`/videos/${videoId}/stats`, "video stats");
  }
  videoReport(videoId: string, kind: "themes" | "suggestions") {
    return this.get(`/videos/${videoId}/${kind}`, `video ${kind}`);
  }
  timeseries(videoId: string, bucket: Bucket) {
    return this.get(`/videos/${videoId}/timeseries?bucket=${bucket}`, "timeseries");
  }
  wordcloud(videoId: string, k: number) {
    return this.get(`/videos/${videoId}/wordcloud?k=${k}`, "word cloud");
  }
  comments(videoId: string, page: number) {
    return this.get(
      `/videos/${videoId}/comments?page=${page}&page_size=50`,
      "comments",
    );
  }
}

// Client-side ordering for the static bundle: the same key semantics the
// API applies, as a presentation-only reorder of the shipped list.
export function sortVideos(
  videos: VideoItem[],
  sort: SortKey,
  direction: Direction,
): VideoItem[] {
  const keyOf = (v: VideoItem): number | string => {
    switch (sort) {
      case "chronological":
        return v.published_at;
      case "alphabetical":
        return v.title.toLowerCase();
      case "views":
        return v.view_count;
      case "likes":
        return v.like_count;
      case "comments":
        return v.comment_count_reported;
    }
  };
  const out = [...videos].sort((a, b) => {
    const ka = keyOf(a);
    const kb = keyOf(b);
    if (ka < kb) return -1;
    if (ka > kb) return 1;
    return a.video_id < b.video_id ? -1 : 1;
  });
  return direction === "desc" ? out.reverse() : out;
}

export class StaticSource implements DataSource {
  readonly mode = "static" as const;

  constructor(
    private base: string,
    private fetcher: Fetcher = fetch.bind(globalThis),
  ) {}

  private async file(name: string, what: string): Promise<any> {
    try {
      return await getJson(this.fetcher, `${this.base}/${name}`, what);
    } catch (err) {
      // a missing bundle file means the artifact was never exported
      if (err instanceof NotFoundError) throw new NotComputedError(what);
      throw err;
    }
  }

  channel() {
    return this.file("channel.json", "channel stats");
  }
  channelReport(kind: "themes" | "suggestions") {
    return this.file(`channel_${kind}.json`, `channel ${kind}`);
  }
  topics() {
    return this.file("channel_topics.json", "topics");
  }
  async topicComments(clusterId: number, page: number) {
    try {
      return await this.file(
        `topics/${clusterId}/comments_page_${page}.json`,
        "topic comments",
      );
    } catch (err) {
      if (err instanceof NotComputedError && page > 1) {
        // pages beyond the export depth come back empty, keeping the total
        const first = (await this.topicComments(clusterId, 1)) as TopicCommentsPage;
        return { ...first, page, comments: [] };
      }
      throw err;
    }
  }
  alerts() {
    return this.file("channel_alerts.json", "alerts");
  }
  superfans() {
    return this.file("channel_superfans.json", "superfans");
  }
  async videos(sort: SortKey, direction: Direction) {
    const payload = (await this.file("videos.json", "videos")) as VideosResponse;
    return { ...payload, videos: sortVideos(payload.videos, sort, direction) };
  }
  async videoStats(videoId: string) {
    await this.requireVideo(videoId);
    return this.file(`videos/${videoId}/stats.json`, "video stats");
  }
  videoReport(videoId: string, kind: "themes" | "suggestions") {
    return this.file(`videos/${videoId}/${kind}.json`, `video ${kind}`);
  }
  timeseries(videoId: string, bucket: Bucket) {
    return this.file(`videos/${videoId}/timeseries_${bucket}.json`, "timeseries");
  }
  async wordcloud(videoId: string, k: number) {
    const payload = (await this.file(
      `videos/${videoId}/wordcloud.json`,
      "word cloud",
    )) as WordcloudResponse;
    return { ...payload, terms: payload.terms.slice(0, k) };
  }
  async comments(videoId: string, page: number) {
    try {
      return await this.file(
        `videos/${videoId}/comments_page_${page}.json`,
        "comments",
      );
    } catch (err) {
      if (err instanceof NotComputedError && page > 1) {
        const first = (await this.comments(videoId, 1)) as CommentsPage;
        return { ...first, page, comments: [] };
      }
      throw err;
    }
  }

  private async requireVideo(videoId: string): Promise<void> {
    const payload = (await this.file("videos.json", "videos")) as VideosResponse;
    if (!payload.videos.some((v) => v.video_id === videoId)) {
      throw new NotFoundError(`unknown video ${videoId}`);
    }
  }
}

// Tags each in-flight load with a generation; answers landing after a newer
// navigation are discarded instead of clobbering the current view.
export class RequestGate {
  private generation = 0;

  next(): number {
    return ++this.generation;
  }

  isCurrent(token: number): boolean {
    return token === this.generation;
  }
}

export function createSource(query: string): DataSource {
  const params = new URLSearchParams(query);
  const bundle = params.get("bundle");
  if (bundle) return new StaticSource(bundle.replace(/\/$/, ""));
  return new LiveSource(params.get("api") ?? "/api");
}
