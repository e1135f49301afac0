// File-backed fetch doubles: serve the committed bundle fixture either as a
// static directory or through live-API URL shapes.

import { readFileSync } from "node:fs";
import { join } from "node:path";

export const BUNDLE_DIR = join(__dirname, "fixtures", "bundle");

function response(status: number, body: unknown): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  } as unknown as Response;
}

function readBundleFile(rel: string): Response {
  try {
    const raw = readFileSync(join(BUNDLE_DIR, rel), "utf-8");
    return response(200, JSON.parse(raw));
  } catch {
    return response(404, { status: 404, code: "not_found", message: rel });
  }
}

export function staticFetch(url: string): Promise<Response> {
  const rel = url.replace(/^bundle\//, "");
  return Promise.resolve(readBundleFile(rel));
}

// Map live API URLs onto the same exported files, mirroring the exporter's
// layout, so live-vs-static comparisons read identical data.
export function liveFetch(url: string): Promise<Response> {
  const [path, queryText] = url.split("?");
  const query = new URLSearchParams(queryText ?? "");
  const page = query.get("page") ?? "1";
  let match: RegExpMatchArray | null;
  if (path === "/api/channel") return Promise.resolve(readBundleFile("channel.json"));
  if (path === "/api/channel/themes") {
    return Promise.resolve(readBundleFile("channel_themes.json"));
  }
  if (path === "/api/channel/suggestions") {
    return Promise.resolve(readBundleFile("channel_suggestions.json"));
  }
  if (path === "/api/channel/topics") {
    return Promise.resolve(readBundleFile("channel_topics.json"));
  }
  if (path === "/api/channel/alerts") {
    return Promise.resolve(readBundleFile("channel_alerts.json"));
  }
  if (path === "/api/channel/superfans") {
    return Promise.resolve(readBundleFile("channel_superfans.json"));
  }
  if (path === "/api/videos") {
    return Promise.resolve(readBundleFile("videos.json"));
  }
  if ((match = path.match(/^\/api\/channel\/topics\/(-?\d+)\/comments$/))) {
    return Promise.resolve(
      readBundleFile(`topics/${match[1]}/comments_page_${page}.json`),
    );
  }
  if ((match = path.match(/^\/api\/videos\/([^/]+)\/stats$/))) {
    return Promise.resolve(readBundleFile(`videos/${match[1]}/stats.json`));
  }
  if ((match = path.match(/^\/api\/videos\/([^/]+)\/(themes|suggestions)$/))) {
    return Promise.resolve(
      readBundleFile(`videos/${match[1]}/${match[2]}.json`),
    );
  }
  if ((match = path.match(/^\/api\/videos\/([^/]+)\/timeseries$/))) {
    const bucket = query.get("bucket") ?? "week";
    return Promise.resolve(
      readBundleFile(`videos/${match[1]}/timeseries_${bucket}.json`),
    );
  }
  if ((match = path.match(/^\/api\/videos\/([^/]+)\/wordcloud$/))) {
    return Promise.resolve(readBundleFile(`videos/${match[1]}/wordcloud.json`));
  }
  if ((match = path.match(/^\/api\/videos\/([^/]+)\/comments$/))) {
    return Promise.resolve(
      readBundleFile(`videos/${match[1]}/comments_page_${page}.json`),
    );
  }
  return Promise.resolve(response(404, { status: 404, code: "not_found", message: path }));
}

export function readBundleJson(rel: string): any {
  return JSON.parse(readFileSync(join(BUNDLE_DIR, rel), "utf-8"));
}

export async function flushAsync(times = 8): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
