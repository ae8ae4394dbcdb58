"""Delayed bidirectional packet channel and round-trip-time monitor.

Time is kept on the integer tick grid internally so that delivery is
exact and reproducible; one-way delays are quantized to whole ticks.
"""
from __future__ import annotations

import bisect
import math
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from typing import Union


class Direction(str, Enum):
    FORWARD = "forward"  # master -> slave
    BACKWARD = "backward"  # slave -> master


@dataclass(frozen=True)
class MotionCmd:
    position: float
    velocity: float
    energy: float | None = None  # cumulative master input energy (TDPA only)


@dataclass(frozen=True)
class ForceFeedback:
    force: float
    energy: float  # cumulative slave input energy


@dataclass(frozen=True)
class ModelUpdate:
    stiffness: float


@dataclass(frozen=True)
class EnergyUpdate:
    energy: float


@dataclass(frozen=True)
class RttProbe:
    sent_at: float
    echoed_at: float | None = None


Payload = Union[MotionCmd, ForceFeedback, ModelUpdate, EnergyUpdate, RttProbe]
HAPTIC_PAYLOADS = (MotionCmd, ForceFeedback, ModelUpdate, EnergyUpdate)


@dataclass(frozen=True)
class Packet:
    seq: int
    send_time: float
    payload: Payload
    delivery_time: float | None = None

    @property
    def is_probe(self) -> bool:
        return isinstance(self.payload, RttProbe)


@dataclass(frozen=True)
class DelayProfile:
    """Piecewise-constant one-way delays.

    ``segments`` holds ``(start_time, forward_delay, backward_delay)``
    triples in seconds. The first segment always starts at 0; a profile
    whose first start is later is extended back with its first delays.
    """

    segments: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        segs = tuple((float(s), float(f), float(b)) for s, f, b in self.segments)
        if not segs:
            raise ValueError("delay profile needs at least one segment")
        starts = [s for s, _, _ in segs]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("segment start times must be strictly increasing")
        for s, f, b in segs:
            if not all(math.isfinite(v) for v in (s, f, b)):
                raise ValueError("delay profile values must be finite")
            if f < 0 or b < 0:
                raise ValueError("delays must be non-negative")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "_starts", starts)

    @classmethod
    def constant(cls, rtt: float, sample_period: float = 0.001) -> "DelayProfile":
        """Profile with round-trip delay ``rtt`` seconds split evenly on the
        tick grid (an odd tick goes to the backward leg)."""
        ticks = round(rtt / sample_period)
        fwd = ticks // 2
        return cls(((0.0, fwd * sample_period, (ticks - fwd) * sample_period),))

    def delays_at(self, t: float) -> tuple[float, float]:
        i = max(bisect.bisect_right(self._starts, t) - 1, 0)
        _, fwd, bwd = self.segments[i]
        return fwd, bwd

    def one_way(self, direction: Direction, t: float) -> float:
        fwd, bwd = self.delays_at(t)
        return fwd if Direction(direction) is Direction.FORWARD else bwd

    def rtt_at(self, t: float) -> float:
        return sum(self.delays_at(t))

    @property
    def initial_rtt(self) -> float:
        return self.rtt_at(0.0)


class _Lane:
    def __init__(self):
        self.queue: deque[tuple[int, Packet]] = deque()
        self.last_seq = -1
        self.last_send_tick = None
        self.last_delivery_tick = None
        self.sent = 0
        self.delivered = 0


class DelayChannel:
    """FIFO delay line per direction with non-overtaking delivery.

    A packet sent at tick ``k`` is due at ``max(previous due tick, k + d)``
    where ``d`` is the one-way delay (in ticks) of the segment containing
    the send time.
    """

    def __init__(self, profile: DelayProfile, sample_period: float = 0.001):
        if not sample_period > 0:
            raise ValueError("sample_period must be positive")
        self.profile = profile
        self.sample_period = sample_period
        self._lanes = {d: _Lane() for d in Direction}

    def _tick(self, t: float) -> int:
        k = round(t / self.sample_period)
        if abs(k * self.sample_period - t) > 1e-9:
            raise ValueError(f"time {t!r} is not on the tick grid")
        return k

    def next_seq(self, direction: Direction) -> int:
        return self._lanes[Direction(direction)].last_seq + 1

    def send(self, pkt: Packet, direction: Direction, t: float) -> Packet:
        """Enqueue ``pkt``; returns it stamped with its delivery time."""
        direction = Direction(direction)
        lane = self._lanes[direction]
        k = self._tick(t)
        if lane.last_send_tick is not None and k < lane.last_send_tick:
            raise ValueError("send times must be non-decreasing")
        if pkt.seq != lane.last_seq + 1:
            raise ValueError(f"expected seq {lane.last_seq + 1}, got {pkt.seq}")
        due = k + round(self.profile.one_way(direction, t) / self.sample_period)
        if lane.last_delivery_tick is not None:
            due = max(due, lane.last_delivery_tick)
        pkt = replace(pkt, send_time=t, delivery_time=due * self.sample_period)
        lane.queue.append((due, pkt))
        lane.last_seq = pkt.seq
        lane.last_send_tick = k
        lane.last_delivery_tick = due
        lane.sent += 1
        return pkt

    def transmit(self, direction: Direction, payload: Payload, t: float) -> Packet:
        """Build the next packet for ``direction`` and send it."""
        pkt = Packet(seq=self.next_seq(direction), send_time=t, payload=payload)
        return self.send(pkt, direction, t)

    def deliver(self, direction: Direction, t: float) -> list[Packet]:
        """Pop every packet due at or before ``t``, in sequence order."""
        lane = self._lanes[Direction(direction)]
        k = self._tick(t)
        out = []
        while lane.queue and lane.queue[0][0] <= k:
            out.append(lane.queue.popleft()[1])
        lane.delivered += len(out)
        return out

    def in_flight(self, direction: Direction) -> int:
        return len(self._lanes[Direction(direction)].queue)

    def sent_count(self, direction: Direction) -> int:
        return self._lanes[Direction(direction)].sent

    def delivered_count(self, direction: Direction) -> int:
        return self._lanes[Direction(direction)].delivered


class RttMonitor:
    """Out-of-band RTT probing with an exponentially weighted average.

    The master sends one probe every ``probe_period`` seconds, the slave
    echoes it on receipt, and each echo updates the running estimate.
    Before the first echo the estimate is the profile's initial RTT.
    """

    def __init__(self, initial_rtt: float, probe_period: float = 0.1, smoothing: float = 0.2):
        if not 0 < smoothing <= 1:
            raise ValueError("smoothing must lie in (0, 1]")
        self.probe_period = probe_period
        self.smoothing = smoothing
        self.estimate = float(initial_rtt)
        self.echoes = 0
        self._next_probe = 0.0

    def probe_due(self, t: float) -> bool:
        if t + 1e-12 >= self._next_probe:
            self._next_probe += self.probe_period
            return True
        return False

    def on_echo(self, probe: RttProbe, t: float) -> float:
        sample = t - probe.sent_at
        self.estimate += self.smoothing * (sample - self.estimate)
        self.echoes += 1
        return sample

    def measure_rtt(self, t: float | None = None) -> float:
        return self.estimate
