// Bootstrap: owns the ViewState <-> URL binding, the data source, and the
// render loop. Every user action funnels through update(), which rewrites
// the URL and re-renders; stale fetches are discarded by generation token.

import { createSource, RequestGate, type DataSource } from "./api";
import { clear, el } from "./dom";
import { formatCount, formatDate } from "./format";
import { renderChannelTab } from "./render/channel";
import { renderVideoTab } from "./render/video";
import {
  DEFAULT_STATE,
  parseState,
  serializeState,
  type TopicSortColumn,
  type ViewState,
} from "./state";
import type { Direction, SortKey, VideoItem } from "./types";

const SORT_OPTIONS: [SortKey, string][] = [
  ["chronological", "newest"],
  ["alphabetical", "title"],
  ["views", "views"],
  ["likes", "likes"],
  ["comments", "comments"],
];

export class App {
  state: ViewState;
  private gate = new RequestGate();

  constructor(
    private root: HTMLElement,
    private source: DataSource,
    initialQuery: string,
    private pushUrl: (query: string) => void = (query) => {
      const base = window.location.pathname;
      const keep = new URLSearchParams(window.location.search);
      const merged = new URLSearchParams(query);
      for (const key of ["bundle", "api"]) {
        const value = keep.get(key);
        if (value) merged.set(key, value);
      }
      const text = merged.toString();
      window.history.replaceState(null, "", text ? `${base}?${text}` : base);
    },
  ) {
    this.state = parseState(initialQuery);
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    this.pushUrl(serializeState(this.state));
    void this.render();
  }

  async render(): Promise<void> {
    const token = this.gate.next();
    const isCurrent = () => this.gate.isCurrent(token);
    clear(this.root);

    const tabs = el("nav", { class: "tabs" });
    for (const tab of ["video", "channel"] as const) {
      const btn = el(
        "button",
        {
          type: "button",
          class: this.state.tab === tab ? "tab active" : "tab",
          "data-tab": tab,
        },
        [tab === "video" ? "Videos" : "Channel"],
      );
      btn.addEventListener("click", () =>
        this.update({ tab, expandedTopic: null, topicPage: 1 }));
      tabs.append(btn);
    }
    const mode = el("span", { class: "mode-badge" }, [
      this.source.mode === "static" ? "static bundle" : "live",
    ]);
    tabs.append(mode);
    this.root.append(tabs);

    const body = el("main", { class: "tab-body" });
    this.root.append(body);

    if (this.state.tab === "video") {
      const layout = el("div", { class: "video-layout" });
      const selector = el("aside", { class: "selector" });
      const panel = el("section", { class: "video-panel" });
      layout.append(selector, panel);
      body.append(layout);
      void this.renderSelector(selector, isCurrent);
      await renderVideoTab(panel, this.source, this.state, {
        onBucketChange: (bucket) =>
          this.update({ bucket: bucket as ViewState["bucket"] }),
        onCommentPage: (page) => this.update({ commentPage: page }),
      }, isCurrent);
    } else {
      await renderChannelTab(body, this.source, this.state, {
        onTopicToggle: (clusterId) =>
          this.update({ expandedTopic: clusterId, topicPage: 1 }),
        onTopicPage: (page) => this.update({ topicPage: page }),
        onTopicSort: (column: TopicSortColumn) =>
          this.update({
            topicSortColumn: column,
            topicSortDesc:
              this.state.topicSortColumn === column
                ? !this.state.topicSortDesc
                : true,
          }),
      }, isCurrent);
    }
  }

  private async renderSelector(
    root: HTMLElement,
    isCurrent: () => boolean,
  ): Promise<void> {
    const controls = el("div", { class: "sort-controls" });
    const select = el("select", { class: "sort-select" });
    for (const [key, label] of SORT_OPTIONS) {
      const option = el("option", { value: key }, [`sort: ${label}`]);
      if (key === this.state.sortKey) option.setAttribute("selected", "");
      select.append(option);
    }
    select.addEventListener("change", () =>
      this.update({ sortKey: select.value as SortKey }));
    const dirBtn = el("button", { type: "button", class: "dir" }, [
      this.state.direction === "desc" ? "↓" : "↑",
    ]);
    dirBtn.addEventListener("click", () =>
      this.update({
        direction: (this.state.direction === "desc" ? "asc" : "desc") as Direction,
      }));
    controls.append(select, dirBtn);
    root.append(controls);

    let videos: VideoItem[];
    try {
      videos = (await this.source.videos(this.state.sortKey,
                                         this.state.direction)).videos;
    } catch (err) {
      if (isCurrent()) root.append(el("p", { class: "error" }, [String(err)]));
      return;
    }
    if (!isCurrent()) return;
    const list = el("ul", { class: "video-list" });
    for (const video of videos) {
      const item = el("li", {
        class: video.video_id === this.state.videoId ? "video selected" : "video",
        "data-video": video.video_id,
      });
      const btn = el("button", { type: "button" }, [
        el("span", { class: "video-title" }, [video.title]),
        el("span", { class: "video-meta" }, [
          `${formatDate(video.published_at)} · ${formatCount(video.view_count)} views` +
            ` · ${formatCount(video.comment_count_reported)} comments`,
        ]),
      ]);
      btn.addEventListener("click", () =>
        this.update({ videoId: video.video_id, commentPage: 1 }));
      item.append(btn);
      list.append(item);
    }
    root.append(list);
  }
}

export function boot(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const source = createSource(window.location.search);
  const app = new App(root, source, window.location.search);
  window.addEventListener("popstate", () => {
    app.state = parseState(window.location.search);
    void app.render();
  });
  void app.render();
}

if (!("__COMMENTLENS_TEST__" in globalThis)) {
  boot();
}

export { DEFAULT_STATE };
