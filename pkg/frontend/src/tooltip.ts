// One shared tooltip element; citation markers and table cells point at it.

import { el } from "./dom";

let tooltip: HTMLElement | null = null;

function ensure(): HTMLElement {
  if (!tooltip || !document.body.contains(tooltip)) {
    tooltip = el("div", { class: "tooltip", role: "tooltip", hidden: "" });
    document.body.append(tooltip);
  }
  return tooltip;
}

export function attachTooltip(target: HTMLElement, content: () => Node): void {
  target.addEventListener("mouseenter", () => {
    const tip = ensure();
    tip.replaceChildren(content());
    tip.removeAttribute("hidden");
    const rect = target.getBoundingClientRect();
    tip.style.left = `${Math.max(4, rect.left + window.scrollX)}px`;
    tip.style.top = `${rect.bottom + window.scrollY + 6}px`;
  });
  target.addEventListener("mouseleave", () => {
    ensure().setAttribute("hidden", "");
  });
}
