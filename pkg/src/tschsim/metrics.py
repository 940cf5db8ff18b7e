"""Per-run measurements and cross-seed aggregation.

Three headline metrics per run: application throughput at the root,
downtime (share of time spent disconnected after the first join), and
covered distance normalized to km/h. Aggregation over seeds reports the
mean and the sample standard deviation (n-1).
"""

import statistics
from dataclasses import dataclass


@dataclass(frozen=True)
class RunMetrics:
    node_id: int
    duration_s: float
    generated_frames: int = 0
    accepted_frames: int = 0
    rejected_frames: int = 0       # refused at enqueue, queue full
    retry_dropped_frames: int = 0  # retired after exhausting retries
    acked_frames: int = 0
    frames_in_queue_end: int = 0
    delivered_frames: int = 0      # unique frames from this node at the root
    delivered_payload_bytes: int = 0
    first_join_time_s: float | None = None
    disconnected_time_after_first_join_s: float = 0.0
    odometer_m: float = 0.0

    @property
    def dropped_frames(self) -> int:
        return self.rejected_frames + self.retry_dropped_frames

    @property
    def total_time_after_first_join_s(self) -> float:
        if self.first_join_time_s is None:
            return 0.0
        return self.duration_s - self.first_join_time_s


def throughput_bps(metrics: RunMetrics) -> float:
    """Application payload bits per second, measured at the root."""
    return 8.0 * metrics.delivered_payload_bytes / metrics.duration_s


def downtime_pct(metrics: RunMetrics) -> float:
    """Percent of time disconnected after the first join.

    A node that never joins scores 100 by convention (it was down for the
    whole observable window); a node that joins at the very last instant
    has no time to be down and scores 0.
    """
    if metrics.first_join_time_s is None:
        return 100.0
    total = metrics.total_time_after_first_join_s
    if total <= 0.0:
        return 0.0
    return 100.0 * metrics.disconnected_time_after_first_join_s / total


def distance_km_per_h(metrics: RunMetrics) -> float:
    """Covered distance as a per-hour rate in km/h."""
    return (metrics.odometer_m / 1000.0) / (metrics.duration_s / 3600.0)


@dataclass(frozen=True)
class ConfigKey:
    """Identifies one point of the experiment matrix.

    The threshold/alpha fields are None for the mode with regulation off,
    which runs once per seed regardless of the sweep lists.
    """
    mode: str
    alpha: float | None = None
    t_min_dbm: float | None = None
    t_max_dbm: float | None = None

    def sort_key(self) -> tuple:
        return (self.mode,
                self.alpha if self.alpha is not None else float("-inf"),
                self.t_min_dbm if self.t_min_dbm is not None else float("-inf"),
                self.t_max_dbm if self.t_max_dbm is not None else float("-inf"))


@dataclass(frozen=True)
class AggregateRow:
    key: ConfigKey
    n_seeds: int
    throughput_bps_mean: float
    throughput_bps_std: float
    downtime_pct_mean: float
    downtime_pct_std: float
    distance_km_h_mean: float
    distance_km_h_std: float


def _mean_std(values: list[float]) -> tuple[float, float]:
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, std


def aggregate(
    rows: list[tuple[ConfigKey, int, RunMetrics]],
    expected_seeds: list[int] | None = None,
) -> list[AggregateRow]:
    """Collapse per-seed rows into one aggregate row per config key.

    Order of the input rows is irrelevant; output is sorted by key. With
    expected_seeds given, a key missing any of them is an error naming the
    absent seeds.
    """
    by_key: dict[ConfigKey, list[tuple[int, RunMetrics]]] = {}
    for key, seed, metrics in rows:
        by_key.setdefault(key, []).append((seed, metrics))

    out = []
    for key in sorted(by_key, key=ConfigKey.sort_key):
        entries = by_key[key]
        if expected_seeds is not None:
            missing = sorted(set(expected_seeds) - {s for s, _ in entries})
            if missing:
                raise ValueError(f"key {key} is missing seeds {missing}")
        ms = [m for _, m in entries]
        tp_mean, tp_std = _mean_std([throughput_bps(m) for m in ms])
        dt_mean, dt_std = _mean_std([downtime_pct(m) for m in ms])
        di_mean, di_std = _mean_std([distance_km_per_h(m) for m in ms])
        out.append(AggregateRow(key, len(ms), tp_mean, tp_std, dt_mean, dt_std,
                                di_mean, di_std))
    return out
