// Response shapes mirroring the backend's shipped JSON schemas.

export type SortKey =
  | "chronological"
  | "alphabetical"
  | "views"
  | "likes"
  | "comments";
export type Direction = "asc" | "desc";
export type Bucket = "day" | "week" | "month";

export interface VideoItem {
  video_id: string;
  channel_id: string;
  title: string;
  published_at: string;
  view_count: number;
  like_count: number;
  comment_count_reported: number;
  fetched_at: string;
}

export interface VideosResponse {
  snapshot_id: number;
  videos: VideoItem[];
}

export interface ChannelStats {
  channel_id: string;
  display_name: string;
  video_count: number;
  total_views: number;
  total_comments: number;
  mean_sentiment: number | null;
  last_collected_at: string | null;
}

export interface ChannelResponse {
  snapshot_id: number;
  stats: ChannelStats;
}

export interface VideoStats {
  video_id: string;
  comment_count: number;
  view_count: number;
  like_count: number;
  mean_sentiment: number | null;
  first_comment_at: string | null;
  last_comment_at: string | null;
}

export interface VideoStatsResponse {
  snapshot_id: number;
  stats: VideoStats;
}

export interface TimeseriesPoint {
  bucket_start: string;
  count: number;
}

export interface TimeseriesResponse {
  snapshot_id: number;
  video_id: string;
  bucket: Bucket;
  series: TimeseriesPoint[];
}

export interface TermEntry {
  term: string;
  frequency: number;
  mean_sentiment: number;
}

export interface WordcloudResponse {
  snapshot_id: number;
  video_id: string;
  terms: TermEntry[];
}

export interface Citation {
  excerpt: string;
  matched_comment_id: string | null;
  similarity: number;
  status: "exact" | "fuzzy" | "unmatched";
  matched_text: string | null;
  matched_author: string | null;
}

export interface ThemeItem {
  title: string;
  description: string;
  citations: Citation[];
  unmatched_count: number;
}

export interface ThemeReport {
  scope: string;
  kind: "themes" | "suggestions";
  items: ThemeItem[];
  model_id: string;
  generated_at: string;
}

export interface ThemeReportResponse {
  snapshot_id: number;
  report: ThemeReport;
}

export interface TopicCluster {
  cluster_id: number;
  label: string;
  member_count: number;
  share_pct: number;
  sentiment_mean: number;
  sentiment_variance: number;
  sentiment_stddev: number;
  exemplar_comment_ids: string[];
  degraded: boolean;
}

export interface TopicsResponse {
  snapshot_id: number;
  total_comments: number;
  clusters: TopicCluster[];
}

export interface CommentItem {
  comment_id: string;
  video_id: string;
  parent_id: string | null;
  author_id: string;
  author_display: string;
  text: string;
  published_at: string;
  like_count: number;
  sentiment: number | null;
}

export interface CommentsPage {
  snapshot_id: number;
  total: number;
  page: number;
  page_size: number;
  comments: CommentItem[];
}

export interface TopicCommentsPage extends CommentsPage {
  cluster_id: number;
}

export interface Alert {
  kind:
    | "volume_high"
    | "volume_low"
    | "sentiment_positive"
    | "sentiment_negative"
    | "update_requests";
  video_id: string;
  window_start: string | null;
  observed: number;
  baseline: number;
  deviation: number;
  supporting_comment_ids: string[];
}

export interface AlertsResponse {
  snapshot_id: number;
  alerts: Alert[];
}

export interface SuperfanEntry {
  author_id: string;
  author_display: string;
  comment_count: number;
  mean_sentiment: number;
}

export interface SuperfansResponse {
  snapshot_id: number;
  superfans: SuperfanEntry[];
  min_comments: number;
}
