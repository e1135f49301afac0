// Video tab: summary stats, comment histogram, sentiment word cloud,
// themes and suggestions with citation tooltips, paged comments.

import { NotComputedError, NotFoundError, type DataSource } from "../api";
import { renderHistogram } from "../charts";
import { sentimentColor } from "../color";
import { clear, el, svgEl } from "../dom";
import { formatCount, formatDate, formatSentiment } from "../format";
import type { ViewState } from "../state";
import type { CommentsPage, VideoStats } from "../types";
import { layoutWordcloud } from "../wordcloud";
import { notComputed, renderReport, sectionCard } from "./reports";

export interface VideoTabHandlers {
  onBucketChange(bucket: string): void;
  onCommentPage(page: number): void;
}

function statsGrid(stats: VideoStats): HTMLElement {
  const cells: [string, string][] = [
    ["Comments", formatCount(stats.comment_count)],
    ["Views", formatCount(stats.view_count)],
    ["Likes", formatCount(stats.like_count)],
    ["Average sentiment", formatSentiment(stats.mean_sentiment)],
    ["First comment", formatDate(stats.first_comment_at)],
    ["Latest comment", formatDate(stats.last_comment_at)],
  ];
  return el(
    "dl",
    { class: "stats-grid" },
    cells.flatMap(([label, value]) => [
      el("dt", {}, [label]),
      el("dd", { "data-stat": label }, [value]),
    ]),
  );
}

function renderWordcloud(terms: Parameters<typeof layoutWordcloud>[0]): SVGElement {
  const placed = layoutWordcloud(terms);
  const svg = svgEl("svg", { viewBox: "0 0 680 400", class: "wordcloud" });
  for (const word of placed) {
    const text = svgEl(
      "text",
      {
        x: String(word.x),
        y: String(word.y),
        "font-size": String(word.fontSize),
        fill: sentimentColor(word.mean_sentiment),
        "text-anchor": "middle",
        "dominant-baseline": "middle",
        class: "wordcloud-term",
      },
      [word.term],
    );
    text.append(svgEl("title", {}, [
      `${word.term}: ${word.frequency}× , sentiment ${formatSentiment(word.mean_sentiment)}`,
    ]));
    svg.append(text);
  }
  return svg;
}

export function renderCommentList(page: CommentsPage,
                                  onPage: (p: number) => void): HTMLElement {
  const wrap = el("div", { class: "comment-list" });
  for (const comment of page.comments) {
    wrap.append(
      el("article", { class: "comment", "data-id": comment.comment_id }, [
        el("header", {}, [
          el("strong", {}, [comment.author_display || "anonymous"]),
          el("span", { class: "comment-meta" }, [
            ` · ${formatDate(comment.published_at)}`,
            comment.sentiment === null
              ? ""
              : ` · ${formatSentiment(comment.sentiment)}`,
            comment.parent_id ? " · reply" : "",
          ]),
        ]),
        el("p", {}, [comment.text]),
      ]),
    );
  }
  if (page.comments.length === 0) {
    wrap.append(el("p", { class: "placeholder" }, ["no comments on this page"]));
  }
  const lastPage = Math.max(1, Math.ceil(page.total / page.page_size));
  const pager = el("nav", { class: "pager" }, [
    el("span", {}, [`page ${page.page} of ${lastPage} (${page.total} comments)`]),
  ]);
  const prev = el("button", { type: "button", class: "pager-prev" }, ["← prev"]);
  const next = el("button", { type: "button", class: "pager-next" }, ["next →"]);
  if (page.page <= 1) prev.setAttribute("disabled", "");
  if (page.page >= lastPage) next.setAttribute("disabled", "");
  prev.addEventListener("click", () => onPage(page.page - 1));
  next.addEventListener("click", () => onPage(page.page + 1));
  pager.append(prev, next);
  wrap.append(pager);
  return wrap;
}

export async function renderVideoTab(
  root: HTMLElement,
  source: DataSource,
  state: ViewState,
  handlers: VideoTabHandlers,
  isCurrent: () => boolean,
): Promise<void> {
  clear(root);
  if (!state.videoId) {
    root.append(el("p", { class: "placeholder" }, [
      "select a video from the list to see its dashboard",
    ]));
    return;
  }
  const videoId = state.videoId;

  const sections: [string, () => Promise<Node>][] = [
    ["Summary", async () => statsGrid((await source.videoStats(videoId)).stats)],
    ["Comments over time", async () => {
      const payload = await source.timeseries(videoId, state.bucket);
      const wrap = el("div", {});
      const picker = el("div", { class: "bucket-picker" });
      for (const bucket of ["day", "week", "month"] as const) {
        const btn = el(
          "button",
          {
            type: "button",
            class: bucket === state.bucket ? "bucket active" : "bucket",
          },
          [bucket],
        );
        btn.addEventListener("click", () => handlers.onBucketChange(bucket));
        picker.append(btn);
      }
      wrap.append(picker, renderHistogram(payload.series));
      return wrap;
    }],
    ["Word cloud", async () =>
      renderWordcloud((await source.wordcloud(videoId, 100)).terms)],
    ["Comment themes", async () =>
      renderReport((await source.videoReport(videoId, "themes")).report)],
    ["Suggestions", async () =>
      renderReport((await source.videoReport(videoId, "suggestions")).report)],
    ["Comments", async () =>
      renderCommentList(await source.comments(videoId, state.commentPage),
                        handlers.onCommentPage)],
  ];

  for (const [title, build] of sections) {
    let body: Node;
    try {
      body = await build();
    } catch (err) {
      if (err instanceof NotComputedError) {
        body = notComputed(title);
      } else if (err instanceof NotFoundError) {
        clear(root);
        root.append(el("p", { class: "placeholder error" }, [
          `video not found: ${videoId}`,
        ]));
        return;
      } else {
        body = el("p", { class: "placeholder error" }, [String(err)]);
      }
    }
    if (!isCurrent()) return; // a newer navigation superseded this render
    root.append(sectionCard(title, body));
  }
}
