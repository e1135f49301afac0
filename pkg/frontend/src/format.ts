// Display formatting; pure functions over API values.

export function formatCount(n: number): string {
  if (n >= 1_000_000) return `${(n / 1_000_000).toFixed(1)}M`;
  if (n >= 10_000) return `${Math.round(n / 1000)}k`;
  if (n >= 1_000) return `${(n / 1000).toFixed(1)}k`;
  return String(n);
}

export function formatSentiment(value: number | null): string {
  if (value === null) return "–";
  const sign = value > 0 ? "+" : "";
  return `${sign}${value.toFixed(2)}`;
}

export function formatDate(iso: string | null): string {
  if (!iso) return "–";
  return iso.slice(0, 10);
}

export function formatPct(value: number): string {
  return `${value.toFixed(1)}%`;
}

export function alertTitle(kind: string): string {
  switch (kind) {
    case "volume_high":
      return "Unusually high commenting";
    case "volume_low":
      return "Unusually low commenting";
    case "sentiment_positive":
      return "Unusually positive sentiment";
    case "sentiment_negative":
      return "Unusually negative sentiment";
    case "update_requests":
      return "Update requests";
    default:
      return kind;
  }
}
