"""commentlens: self-hosted audience comment analytics for one YouTube
channel, precomputed into immutable snapshots and served read-only."""

__version__ = "0.1.0"
