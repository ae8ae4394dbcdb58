"""Hunt-Crossley contact model of the 1-D soft object on the slave side."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HuntCrossleyParams:
    """Contact law ``f = K x^n + B x^n xdot + noise`` for ``x >= 0``.

    ``B_damp`` multiplies ``x^n * xdot`` with ``xdot`` in m/s, so the damping
    term is in newtons. The noise term is measurement noise drawn from the
    session RNG once per tick.
    """

    K: float = 200.0
    n: float = 1.5
    B_damp: float = 0.5
    noise_mean: float = 0.0
    noise_std: float = 0.1
    noise_enabled: bool = True

    def __post_init__(self):
        for name in ("K", "n", "B_damp", "noise_mean", "noise_std"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.K < 0:
            raise ValueError("K must be non-negative")
        if self.n <= 0:
            raise ValueError("n must be positive")
        if self.B_damp < 0:
            raise ValueError("B_damp must be non-negative")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")


def contact_force(
    x: float,
    x_dot: float,
    params: HuntCrossleyParams,
    rng: np.random.Generator | None = None,
) -> float:
    """Reaction force of the object for penetration ``x`` and rate ``x_dot``.

    Out of contact (``x < 0``) the force is exactly zero and no noise is
    drawn. When noise is enabled an ``rng`` must be supplied.
    """
    if x < 0:
        return 0.0
    xn = x**params.n
    force = params.K * xn + params.B_damp * xn * x_dot
    if params.noise_enabled:
        if rng is None:
            raise ValueError("noise enabled but no rng given")
        force += rng.normal(params.noise_mean, params.noise_std)
    return float(force)
