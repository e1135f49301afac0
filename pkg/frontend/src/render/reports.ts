// Theme/suggestion lists with hoverable citation markers. Exact and fuzzy
// citations show the matched comment in a tooltip; unmatched ones are
// flagged inline instead of pretending to resolve.

import { el } from "../dom";
import { attachTooltip } from "../tooltip";
import type { Citation, ThemeReport } from "../types";

// click on a citation pins the full comment in a dismissable modal, which
// reads better than a hover tooltip for long comments
export function openCitationModal(citation: Citation): void {
  document.querySelector(".modal-backdrop")?.remove();
  const backdrop = el("div", { class: "modal-backdrop" });
  const modal = el("div", { class: "modal", role: "dialog" });
  const close = el("button", { type: "button", class: "modal-close" }, ["close"]);
  close.addEventListener("click", () => backdrop.remove());
  backdrop.addEventListener("click", (event) => {
    if (event.target === backdrop) backdrop.remove();
  });
  modal.append(close, citationTooltip(citation));
  backdrop.append(modal);
  document.body.append(backdrop);
}

function citationTooltip(citation: Citation): Node {
  const box = el("div", { class: "citation-tip" });
  if (citation.matched_comment_id && citation.matched_text) {
    box.append(
      el("p", { class: "citation-text" }, [citation.matched_text]),
      el("p", { class: "citation-author" }, [
        `— ${citation.matched_author || "unknown commenter"}`,
        citation.status === "fuzzy"
          ? ` (closest match, ${(citation.similarity * 100).toFixed(0)}% similar)`
          : "",
      ]),
    );
  } else {
    box.append(
      el("p", { class: "citation-text" }, [`“${citation.excerpt}”`]),
      el("p", { class: "citation-missing" }, ["no matching comment found"]),
    );
  }
  return box;
}

export function renderReport(report: ThemeReport): HTMLElement {
  const list = el("div", { class: "report" });
  for (const item of report.items) {
    const head = el("h4", {}, [item.title]);
    const body = el("p", {}, [item.description]);
    const cites = el("span", { class: "citations" });
    item.citations.forEach((citation, i) => {
      const marker = el(
        "button",
        {
          class:
            citation.status === "unmatched"
              ? "citation-marker unmatched"
              : "citation-marker",
          type: "button",
          "data-status": citation.status,
        },
        [`[${i + 1}]`],
      );
      attachTooltip(marker, () => citationTooltip(citation));
      marker.addEventListener("click", () => openCitationModal(citation));
      cites.append(marker);
    });
    if (item.unmatched_count > 0) {
      cites.append(
        el("span", { class: "unmatched-note" }, [
          `${item.unmatched_count} citation${item.unmatched_count > 1 ? "s" : ""} without a matching comment`,
        ]),
      );
    }
    head.append(" ", cites);
    list.append(head, body);
  }
  if (report.items.length === 0) {
    list.append(el("p", { class: "placeholder" }, ["no items generated"]));
  }
  return list;
}

export function notComputed(what: string): HTMLElement {
  return el("p", { class: "placeholder not-computed" }, [
    `${what}: not computed for this snapshot`,
  ]);
}

export function sectionCard(title: string, body: Node): HTMLElement {
  return el("section", { class: "card" }, [el("h3", {}, [title]), body]);
}
