"""Model-mediated teleoperation: stiffness estimation and local spring model."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

INITIAL_STIFFNESS = 100.0  # N/m, local model before first contact
K_MAX = 1e5


@dataclass
class StiffnessEstimate:
    """Sliding window of ``(penetration, force)`` pairs and the current fit.

    Only contact samples (``x > 0``) enter the fit. Below
    ``min_contact_samples`` the previous estimate is kept.
    """

    k_hat: float = INITIAL_STIFFNESS
    window_size: int = 100
    min_contact_samples: int = 10
    window: deque = field(default_factory=deque)

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError("window_size must be at least 1")
        self.window = deque(self.window, maxlen=self.window_size)

    @property
    def sample_count(self) -> int:
        return sum(1 for x, _ in self.window if x > 0)

    def push(self, x: float, f: float) -> float:
        self.window.append((x, f))
        return estimate_stiffness(self)


def estimate_stiffness(est: StiffnessEstimate) -> float:
    """Through-origin least squares ``k = sum(f x) / sum(x^2)`` on contact samples."""
    sxx = sxf = 0.0
    n = 0
    for x, f in est.window:
        if x > 0:
            sxx += x * x
            sxf += x * f
            n += 1
    if n >= est.min_contact_samples and sxx > 0:
        est.k_hat = min(max(sxf / sxx, 0.0), K_MAX)
    return est.k_hat


@dataclass
class LocalModel:
    """Master-side linear spring whose applied stiffness tracks the last
    received estimate with a bounded rendered-force step."""

    k_target: float = INITIAL_STIFFNESS
    k_applied: float = INITIAL_STIFFNESS
    max_force_jump: float = 0.02  # N per tick

    def __post_init__(self):
        if self.k_applied < 0 or self.k_target < 0:
            raise ValueError("stiffness must be non-negative")
        if self.max_force_jump < 0:
            raise ValueError("max_force_jump must be non-negative")


def update_local_model(received: float | None, model: LocalModel, x_m: float) -> float:
    if received is not None:
        model.k_target = received
    gap = model.k_target - model.k_applied
    if x_m <= 0:
        model.k_applied = model.k_target
    elif gap != 0:
        max_step = model.max_force_jump / x_m
        model.k_applied += float(np.clip(gap, -max_step, max_step))
    return model.k_applied


def master_force(x_m: float, model: LocalModel) -> float:
    return model.k_applied * x_m if x_m > 0 else 0.0
