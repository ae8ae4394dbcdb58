"""Scripted master trajectories standing in for the human operator.

Positions are along the pressing axis: positive values penetrate the
object surface (at 0), negative values are free space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class ScriptKind(str, Enum):
    SINUSOIDAL_PRESS = "sinusoidal_press"
    HOLD_PRESS = "hold_press"
    FREE_SPACE = "free_space"
    PIECEWISE = "piecewise"


@dataclass(frozen=True)
class TrajectoryScript:
    """Open-loop master trajectory.

    ``hold_press`` follows the sinusoid up to its first peak and then holds
    ``press_depth``. ``piecewise`` interpolates linearly between ``knots``,
    a sequence of ``(time_s, position_m)`` pairs with increasing times.
    """

    kind: ScriptKind = ScriptKind.SINUSOIDAL_PRESS
    press_depth: float = 0.02
    frequency: float = 0.5
    start_offset: float = 0.0
    knots: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", ScriptKind(self.kind))
        object.__setattr__(self, "knots", tuple((float(t), float(x)) for t, x in self.knots))
        if not self.press_depth > 0:
            raise ValueError("press_depth must be positive")
        if self.start_offset < 0:
            raise ValueError("start_offset must be non-negative")
        if self.kind in (ScriptKind.SINUSOIDAL_PRESS, ScriptKind.HOLD_PRESS):
            if not 0 < self.frequency <= 1.0:
                raise ValueError("press frequency must lie in (0, 1] Hz")
        if self.kind is ScriptKind.PIECEWISE:
            if len(self.knots) < 2:
                raise ValueError("piecewise script needs at least two knots")
            times = [t for t, _ in self.knots]
            if any(b <= a for a, b in zip(times, times[1:])):
                raise ValueError("knot times must be strictly increasing")
            if any(abs(x) > self.press_depth for _, x in self.knots):
                raise ValueError("knot positions must lie within +-press_depth")


def master_position(t: float, script: TrajectoryScript) -> tuple[float, float]:
    """Return ``(position, velocity)`` of the master at time ``t``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    kind = script.kind
    if kind is ScriptKind.FREE_SPACE:
        return -script.press_depth, 0.0
    if kind is ScriptKind.PIECEWISE:
        return _piecewise(t, script.knots)

    tau = t - script.start_offset
    if tau < 0:
        return 0.0, 0.0
    w = 2.0 * math.pi * script.frequency
    if kind is ScriptKind.HOLD_PRESS and tau >= 0.25 / script.frequency:
        return script.press_depth, 0.0
    return script.press_depth * math.sin(w * tau), script.press_depth * w * math.cos(w * tau)


def _piecewise(t, knots):
    times = [k[0] for k in knots]
    if t <= times[0]:
        return knots[0][1], 0.0
    if t >= times[-1]:
        return knots[-1][1], 0.0
    i = int(np.searchsorted(times, t, side="right")) - 1
    (t0, x0), (t1, x1) = knots[i], knots[i + 1]
    slope = (x1 - x0) / (t1 - t0)
    return x0 + slope * (t - t0), slope
