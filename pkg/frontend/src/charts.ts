// SVG bar histogram for the comments-over-time panel.

import { svgEl } from "./dom";
import type { TimeseriesPoint } from "./types";

const WIDTH = 640;
const HEIGHT = 180;
const PAD = { left: 36, right: 8, top: 10, bottom: 22 };

export function renderHistogram(series: TimeseriesPoint[]): SVGElement {
  const svg = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "histogram",
    role: "img",
  });
  if (series.length === 0) {
    svg.append(
      svgEl("text", { x: "320", y: "90", "text-anchor": "middle" }, [
        "no comments",
      ]),
    );
    return svg;
  }
  const maxCount = Math.max(...series.map((p) => p.count), 1);
  const plotW = WIDTH - PAD.left - PAD.right;
  const plotH = HEIGHT - PAD.top - PAD.bottom;
  const barW = plotW / series.length;
  series.forEach((point, i) => {
    const h = (point.count / maxCount) * plotH;
    const bar = svgEl("rect", {
      class: "histogram-bar",
      x: String(PAD.left + i * barW + barW * 0.08),
      y: String(PAD.top + plotH - h),
      width: String(Math.max(barW * 0.84, 1)),
      height: String(h),
    });
    bar.append(
      svgEl("title", {}, [`${point.bucket_start.slice(0, 10)}: ${point.count}`]),
    );
    svg.append(bar);
  });
  // y axis: zero and max
  svg.append(svgEl("text", {
    x: String(PAD.left - 4), y: String(PAD.top + 8),
    "text-anchor": "end", class: "axis-label",
  }, [String(maxCount)]));
  svg.append(svgEl("text", {
    x: String(PAD.left - 4), y: String(PAD.top + plotH),
    "text-anchor": "end", class: "axis-label",
  }, ["0"]));
  // x axis: first and last bucket
  svg.append(svgEl("text", {
    x: String(PAD.left), y: String(HEIGHT - 6), class: "axis-label",
  }, [series[0].bucket_start.slice(0, 10)]));
  svg.append(svgEl("text", {
    x: String(WIDTH - PAD.right), y: String(HEIGHT - 6),
    "text-anchor": "end", class: "axis-label",
  }, [series[series.length - 1].bucket_start.slice(0, 10)]));
  return svg;
}
