"""Perceptual deadband transmission gate with zero-order-hold reconstruction."""
from __future__ import annotations

from dataclasses import dataclass

# Default absolute floors per stream unit.
FORCE_FLOOR = 0.01  # N
STIFFNESS_FLOOR = 0.01  # N/m
VELOCITY_FLOOR = 0.001  # m/s
POSITION_FLOOR = 0.0001  # m


@dataclass
class DeadbandCodec:
    """Sender and receiver state of one deadband-coded scalar stream.

    A sample is sent when it leaves the band ``dbp * |last_tx|`` around the
    last transmitted value. Near zero the band is widened by ``abs_floor``
    so that small fluctuations around 0 do not flood the channel.
    ``dbp == 0`` switches data reduction off: every sample is sent.
    """

    dbp: float = 0.1
    abs_floor: float = FORCE_FLOOR
    last_tx: float | None = None
    last_rx: float = 0.0

    def __post_init__(self):
        if not 0 <= self.dbp < 1:
            raise ValueError("dbp must lie in [0, 1)")
        if self.abs_floor < 0:
            raise ValueError("abs_floor must be non-negative")

    def threshold(self) -> float:
        ref = abs(self.last_tx)
        return self.dbp * ref + (self.abs_floor if ref < self.abs_floor else 0.0)

    def should_transmit(self, current: float) -> bool:
        if (
            self.dbp == 0
            or self.last_tx is None
            or abs(current - self.last_tx) > self.threshold()
        ):
            self.last_tx = current
            return True
        return False

    def reconstruct(self, received: float | None = None) -> float:
        if received is not None:
            self.last_rx = received
        return self.last_rx

    def reset_sender(self):
        """Force the next sample through (e.g. after a scheme handover)."""
        self.last_tx = None


def should_transmit(current: float, codec: DeadbandCodec) -> bool:
    return codec.should_transmit(current)


def reconstruct(received: float | None, codec: DeadbandCodec) -> float:
    return codec.reconstruct(received)
