// Channel tab: stats header, channel themes/suggestions, sortable topic
// table with expandable member comments, alert feed grouped by kind,
// superfan list.

import { NotComputedError, type DataSource } from "../api";
import { sentimentColor } from "../color";
import { clear, el } from "../dom";
import {
  alertTitle,
  formatCount,
  formatDate,
  formatPct,
  formatSentiment,
} from "../format";
import type { TopicSortColumn, ViewState } from "../state";
import type { Alert, ChannelStats, TopicCluster } from "../types";
import { notComputed, renderReport, sectionCard } from "./reports";
import { renderCommentList } from "./video";

export interface ChannelTabHandlers {
  onTopicToggle(clusterId: number | null): void;
  onTopicPage(page: number): void;
  onTopicSort(column: TopicSortColumn): void;
}

function header(stats: ChannelStats): HTMLElement {
  const cells: [string, string][] = [
    ["Videos", formatCount(stats.video_count)],
    ["Views", formatCount(stats.total_views)],
    ["Comments", formatCount(stats.total_comments)],
    ["Average sentiment", formatSentiment(stats.mean_sentiment)],
    ["Data collected", formatDate(stats.last_collected_at)],
  ];
  return el("div", {}, [
    el("h2", {}, [stats.display_name || stats.channel_id]),
    el(
      "dl",
      { class: "stats-grid" },
      cells.flatMap(([label, value]) => [
        el("dt", {}, [label]),
        el("dd", { "data-stat": label }, [value]),
      ]),
    ),
  ]);
}

const TOPIC_COLUMNS: [TopicSortColumn, string][] = [
  ["label", "Topic"],
  ["share_pct", "Share of comments"],
  ["sentiment_mean", "Sentiment mean"],
  ["sentiment_variance", "Sentiment variance"],
];

export function sortClusters(clusters: TopicCluster[],
                             column: TopicSortColumn,
                             desc: boolean): TopicCluster[] {
  const out = [...clusters].sort((a, b) => {
    const ka = a[column];
    const kb = b[column];
    if (ka < kb) return -1;
    if (ka > kb) return 1;
    return a.cluster_id - b.cluster_id;
  });
  return desc ? out.reverse() : out;
}

async function topicTable(
  source: DataSource,
  state: ViewState,
  handlers: ChannelTabHandlers,
  isCurrent: () => boolean,
): Promise<Node> {
  const payload = await source.topics();
  const wrap = el("div", {});
  const table = el("table", { class: "topic-table" });
  const headRow = el("tr", {}, []);
  for (const [column, label] of TOPIC_COLUMNS) {
    const th = el("th", { "data-column": column }, [
      label,
      state.topicSortColumn === column
        ? (state.topicSortDesc ? " ↓" : " ↑")
        : "",
    ]);
    th.addEventListener("click", () => handlers.onTopicSort(column));
    headRow.append(th);
  }
  headRow.append(el("th", {}, ["Comments"]));
  const thead = el("thead", {}, [headRow]);
  const tbody = el("tbody");
  table.append(thead, tbody);

  const render = () => {
    clear(tbody);
    const ordered = sortClusters(payload.clusters, state.topicSortColumn,
                                 state.topicSortDesc);
    for (const cluster of ordered) {
      const row = el("tr", {
        class: cluster.cluster_id === state.expandedTopic
          ? "topic-row expanded"
          : "topic-row",
        "data-cluster": String(cluster.cluster_id),
      });
      row.append(
        el("td", {}, [
          cluster.label,
          cluster.degraded ? el("span", { class: "degraded" }, [" (auto)"]) : "",
        ]),
        el("td", {}, [
          `${formatPct(cluster.share_pct)} (${formatCount(cluster.member_count)})`,
        ]),
        (() => {
          const td = el("td", {}, [formatSentiment(cluster.sentiment_mean)]);
          td.style.color = sentimentColor(cluster.sentiment_mean);
          return td;
        })(),
        el("td", {}, [cluster.sentiment_variance.toFixed(3)]),
      );
      const expandCell = el("td", {});
      const toggle = el("button", { type: "button", class: "expand" }, [
        cluster.cluster_id === state.expandedTopic ? "hide" : "browse",
      ]);
      toggle.addEventListener("click", () => {
        handlers.onTopicToggle(
          cluster.cluster_id === state.expandedTopic ? null : cluster.cluster_id,
        );
      });
      expandCell.append(toggle);
      row.append(expandCell);
      tbody.append(row);
      if (cluster.cluster_id === state.expandedTopic) {
        const holder = el("td", { colspan: "5", class: "topic-comments" });
        holder.append(el("p", { class: "placeholder" }, ["loading comments…"]));
        tbody.append(el("tr", { class: "topic-detail" }, [holder]));
        source
          .topicComments(cluster.cluster_id, state.topicPage)
          .then((page) => {
            if (!isCurrent()) return;
            clear(holder);
            holder.append(renderCommentList(page, handlers.onTopicPage));
          })
          .catch((err) => {
            if (!isCurrent()) return;
            clear(holder);
            holder.append(el("p", { class: "placeholder error" }, [String(err)]));
          });
      }
    }
  };
  render();
  wrap.append(table);
  return wrap;
}

function alertFeed(alerts: Alert[]): Node {
  if (alerts.length === 0) {
    return el("p", { class: "placeholder" }, ["no alerts for this snapshot"]);
  }
  const byKind = new Map<string, Alert[]>();
  for (const alert of alerts) {
    const group = byKind.get(alert.kind) ?? [];
    group.push(alert);
    byKind.set(alert.kind, group);
  }
  const feed = el("div", { class: "alert-feed" });
  for (const [kind, group] of byKind) {
    const section = el("div", { class: `alert-group ${kind}` }, [
      el("h4", {}, [alertTitle(kind)]),
    ]);
    for (const alert of group) {
      const detail =
        alert.kind === "update_requests"
          ? `${alert.observed} requests (baseline ${alert.baseline})`
          : `observed ${alert.observed.toFixed(2)} vs baseline ` +
            `${alert.baseline.toFixed(2)}` +
            (alert.window_start
              ? `, week of ${formatDate(alert.window_start)}`
              : "");
      section.append(
        el("p", { class: "alert", "data-video": alert.video_id }, [
          el("strong", {}, [alert.video_id]),
          ` — ${detail}`,
        ]),
      );
    }
    feed.append(section);
  }
  return feed;
}

export async function renderChannelTab(
  root: HTMLElement,
  source: DataSource,
  state: ViewState,
  handlers: ChannelTabHandlers,
  isCurrent: () => boolean,
): Promise<void> {
  clear(root);
  const sections: [string, () => Promise<Node>][] = [
    ["Channel", async () => header((await source.channel()).stats)],
    ["Comment themes", async () =>
      renderReport((await source.channelReport("themes")).report)],
    ["Suggestions", async () =>
      renderReport((await source.channelReport("suggestions")).report)],
    ["Topics", () => topicTable(source, state, handlers, isCurrent)],
    ["Change alerts", async () => alertFeed((await source.alerts()).alerts)],
    ["Superfans", async () => {
      const payload = await source.superfans();
      if (payload.superfans.length === 0) {
        return el("p", { class: "placeholder" }, [
          `no commenters with at least ${payload.min_comments} comments`,
        ]);
      }
      const list = el("ol", { class: "superfans" });
      for (const fan of payload.superfans) {
        list.append(
          el("li", { "data-author": fan.author_id }, [
            el("strong", {}, [fan.author_display || fan.author_id]),
            ` — ${formatSentiment(fan.mean_sentiment)} over ` +
              `${formatCount(fan.comment_count)} comments`,
          ]),
        );
      }
      return list;
    }],
  ];
  for (const [title, build] of sections) {
    let body: Node;
    try {
      body = await build();
    } catch (err) {
      body = err instanceof NotComputedError
        ? notComputed(title)
        : el("p", { class: "placeholder error" }, [String(err)]);
    }
    if (!isCurrent()) return;
    root.append(sectionCard(title, body));
  }
}
