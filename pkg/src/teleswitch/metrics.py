"""Comparison quantities computed from a finished trace."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import Direction
from .qoe import SchemeId


@dataclass(frozen=True)
class RunSummary:
    avg_fwd_packet_rate: float
    avg_bwd_packet_rate: float
    displayed_stiffness: float
    force_tracking_rmse: float
    position_tracking_rmse: float
    mean_abs_force_error: float
    final_scheme: SchemeId
    switch_events: list = field(default_factory=list)

    def as_lines(self) -> list[str]:
        events = ";".join(f"{t * 1000:.0f}ms:{a.value}->{b.value}" for t, a, b in self.switch_events)
        return [
            f"avg_fwd_packet_rate = {self.avg_fwd_packet_rate:.6f}",
            f"avg_bwd_packet_rate = {self.avg_bwd_packet_rate:.6f}",
            f"displayed_stiffness = {self.displayed_stiffness:.6f}",
            f"force_tracking_rmse = {self.force_tracking_rmse:.9f}",
            f"position_tracking_rmse = {self.position_tracking_rmse:.9f}",
            f"mean_abs_force_error = {self.mean_abs_force_error:.9f}",
            f"final_scheme = {self.final_scheme.value}",
            f"switch_events = {events}",
        ]


def packet_rate(trace, direction: Direction) -> float:
    """Haptic packets per second in one direction (RTT probes excluded)."""
    col = "pkts_fwd" if Direction(direction) is Direction.FORWARD else "pkts_bwd"
    return float(trace[col][-1]) / trace.config.duration


def _contact_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Half-open index ranges of consecutive True entries."""
    edges = np.diff(np.concatenate(([0], mask.astype(np.int8), [0])))
    return list(zip(np.flatnonzero(edges == 1), np.flatnonzero(edges == -1)))


def displayed_stiffness(trace) -> float:
    """Slope through the origin of displayed force against master
    penetration over the final complete press; NaN without contact."""
    x = trace["x_m"]
    runs = _contact_runs(x > 0)
    if not runs:
        return math.nan
    complete = [r for r in runs if r[1] < len(x)]
    lo, hi = (complete or runs)[-1]
    xs, fs = x[lo:hi], trace["f_m"][lo:hi]
    return float(np.dot(xs, fs) / np.dot(xs, xs))


def _aligned_pairs(trace) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (master i, slave j) with j shifted by the forward delay."""
    cfg = trace.config
    n = len(trace)
    t = np.arange(n) * cfg.sample_period
    shift = np.array(
        [round(cfg.delay_profile.one_way(Direction.FORWARD, ti) / cfg.sample_period) for ti in t],
        dtype=int,
    )
    i = np.arange(n)
    j = i + shift
    ok = j < n
    return i[ok], j[ok]


def tracking_errors(trace) -> tuple[float, float]:
    """Delay-aligned ``(force_rmse, position_rmse)`` between master and slave."""
    i, j = _aligned_pairs(trace)
    if len(i) == 0:
        return 0.0, 0.0
    df = trace["f_m"][i] - trace["f_s"][j]
    dx = trace["x_m"][i] - trace["x_s"][j]
    return float(np.sqrt(np.mean(df**2))), float(np.sqrt(np.mean(dx**2)))


def mean_abs_force_error(trace) -> float:
    """Delay-aligned time average of ``|f_m - f_s|``."""
    i, j = _aligned_pairs(trace)
    if len(i) == 0:
        return 0.0
    return float(np.mean(np.abs(trace["f_m"][i] - trace["f_s"][j])))


def summarize(trace) -> RunSummary:
    f_rmse, x_rmse = tracking_errors(trace)
    return RunSummary(
        avg_fwd_packet_rate=packet_rate(trace, Direction.FORWARD),
        avg_bwd_packet_rate=packet_rate(trace, Direction.BACKWARD),
        displayed_stiffness=displayed_stiffness(trace),
        force_tracking_rmse=f_rmse,
        position_tracking_rmse=x_rmse,
        mean_abs_force_error=mean_abs_force_error(trace),
        final_scheme=SchemeId(trace["scheme"][-1]),
        switch_events=list(trace.switch_events),
    )
