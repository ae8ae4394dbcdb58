"""QoE curves over round-trip delay and QoE-maximizing scheme selection.

Each scheme's QoE is modelled as a four-parameter logistic in the
round-trip delay ``tau`` (milliseconds)::

    Q(tau) = D + (A - D) / (1 + (tau / C) ** B)

With ``B < 0`` the curve falls from ``D`` at ``tau = 0`` towards ``A`` as
``tau`` grows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
from scipy.optimize import least_squares


class SchemeId(str, Enum):
    TDPA_PD = "tdpa"
    MMT_PD = "mmt"


@dataclass(frozen=True)
class FourPLParams:
    A: float
    B_slope: float
    C: float
    D: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.A, self.B_slope, self.C, self.D)):
            raise ValueError("4PL coefficients must be finite")
        if not self.C > 0:
            raise ValueError("C must be positive")
        if self.B_slope == 0:
            raise ValueError("B_slope must be non-zero")


# Coefficients fitted to the subjective ratings of the two schemes.
DEFAULT_QOE = {
    SchemeId.TDPA_PD: FourPLParams(A=2.088, B_slope=-1.82, C=58.48, D=4.585),
    SchemeId.MMT_PD: FourPLParams(A=0.0, B_slope=-1.187, C=793.7, D=3.64),
}


@dataclass(frozen=True)
class HysteresisConfig:
    margin: float = 0.1  # MOS
    dwell: int = 3  # consecutive decisions

    def __post_init__(self):
        if self.margin < 0:
            raise ValueError("margin must be non-negative")
        if self.dwell < 1:
            raise ValueError("dwell must be at least 1")


def evaluate(tau, p: FourPLParams):
    """QoE (MOS, unclamped) at round-trip delay ``tau`` in ms.

    Accepts scalars or arrays. ``tau = 0`` returns the analytic limit.
    """
    tau_arr = np.asarray(tau, dtype=float)
    if np.any(tau_arr < 0):
        raise ValueError("tau must be non-negative")
    with np.errstate(divide="ignore", over="ignore"):
        ratio = np.power(tau_arr / p.C, p.B_slope)
        q = p.D + (p.A - p.D) / (1.0 + ratio)
    if np.ndim(q) == 0:
        return float(q)
    return q


# -- fitting -----------------------------------------------------------------


class DegenerateFitError(ValueError):
    """Rating data cannot constrain a 4PL curve."""


@dataclass(frozen=True)
class FitResult:
    params: FourPLParams
    rms: float
    iterations: int
    converged: bool


def _model(theta, tau):
    a, b, log_c, d = theta
    with np.errstate(divide="ignore", over="ignore"):
        ratio = np.power(tau / math.exp(log_c), b)
    return d + (a - d) / (1.0 + ratio)


def fit_4pl(points: Iterable[tuple[float, float]], max_iter: int = 500, rtol: float = 1e-8) -> FitResult:
    """Least-squares 4PL fit to ``(tau_ms, MOS)`` rating points.

    Starts from ``D = max MOS``, ``A = min MOS``, ``C = median tau``,
    ``B = -1`` and refines with a trust-region solver until the relative
    change of the residual falls below ``rtol``.
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 4:
        raise DegenerateFitError("need at least 4 (tau, MOS) points")
    tau, mos = pts[:, 0], pts[:, 1]
    if np.any(tau < 0) or not np.all(np.isfinite(pts)):
        raise DegenerateFitError("tau must be finite and non-negative, MOS finite")
    positive = np.unique(tau[tau > 0])
    if len(positive) < 3:
        raise DegenerateFitError("need at least 3 distinct positive delays")
    if np.ptp(mos) == 0:
        raise DegenerateFitError("constant ratings do not determine a slope")

    theta0 = np.array([mos.min(), -1.0, math.log(np.median(positive)), mos.max()])
    sol = least_squares(
        lambda th: _model(th, tau) - mos,
        theta0,
        method="trf",
        ftol=rtol,
        xtol=1e-15,
        gtol=1e-15,
        max_nfev=max_iter,
        x_scale="jac",
    )
    a, b, log_c, d = sol.x
    if b == 0 or not np.all(np.isfinite(sol.x)):
        raise DegenerateFitError("fit collapsed to a flat curve")
    rms = float(np.sqrt(np.mean(sol.fun**2)))
    return FitResult(
        FourPLParams(A=float(a), B_slope=float(b), C=math.exp(log_c), D=float(d)),
        rms,
        int(sol.nfev),
        sol.status > 0,
    )


def load_ratings(path: str | Path) -> list[tuple[float, float]]:
    """Read ``tau_ms, MOS`` lines; blank lines and ``#`` comments are skipped."""
    out = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p for p in line.replace(",", " ").split() if p]
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'tau_ms, MOS'")
        out.append((float(parts[0]), float(parts[1])))
    return out


# -- selection ---------------------------------------------------------------


def best_scheme(tau: float, params: Mapping[SchemeId, FourPLParams], current: SchemeId | None = None) -> SchemeId:
    """Literal arg-max of QoE over the schemes; ties keep ``current``."""
    scores = {s: evaluate(tau, p) for s, p in params.items()}
    top = max(scores.values())
    if current is not None and scores.get(current) == top:
        return current
    return next(s for s in SchemeId if s in scores and scores[s] == top)


@dataclass
class SchemeSelector:
    """Arg-max selection with a MOS margin and a dwell count.

    A switch away from the current scheme is only returned after the
    challenger has beaten it by more than ``margin`` on ``dwell``
    consecutive decisions.
    """

    params: Mapping[SchemeId, FourPLParams] = field(default_factory=lambda: dict(DEFAULT_QOE))
    hysteresis: HysteresisConfig = field(default_factory=HysteresisConfig)
    _candidate: SchemeId | None = field(default=None, init=False, repr=False)
    _count: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        missing = set(SchemeId) - set(self.params)
        if missing:
            raise ValueError(f"missing QoE parameters for {sorted(m.value for m in missing)}")

    def decide(self, tau: float, current: SchemeId) -> SchemeId:
        current = SchemeId(current)
        candidate = best_scheme(tau, self.params, current)
        gap = evaluate(tau, self.params[candidate]) - evaluate(tau, self.params[current])
        if candidate is current or not gap > self.hysteresis.margin:
            self._candidate, self._count = None, 0
            return current
        if candidate is self._candidate:
            self._count += 1
        else:
            self._candidate, self._count = candidate, 1
        if self._count >= self.hysteresis.dwell:
            self._candidate, self._count = None, 0
            return candidate
        return current


def select_scheme(
    tau: float,
    params: Mapping[SchemeId, FourPLParams],
    current: SchemeId,
    hys: HysteresisConfig | None = None,
    selector: SchemeSelector | None = None,
) -> SchemeId:
    """One selection decision. Pass a ``selector`` to carry the dwell count
    across calls; without one each call is a fresh decision."""
    if selector is None:
        selector = SchemeSelector(params=params, hysteresis=hys or HysteresisConfig())
    return selector.decide(tau, current)


def crossing_point(
    p1: FourPLParams,
    p2: FourPLParams,
    lo: float = 1e-6,
    hi: float = 400.0,
    tol: float = 1e-10,
) -> float:
    """Delay (ms) where the two QoE curves intersect, by bisection.

    Raises ``ValueError`` unless the difference changes sign on ``[lo, hi]``.
    """
    def diff(t):
        return evaluate(t, p1) - evaluate(t, p2)

    f_lo, f_hi = diff(lo), diff(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError("curves do not cross on the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = diff(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sign_changes(p1: FourPLParams, p2: FourPLParams, lo: float = 1e-6, hi: float = 400.0, n: int = 40001) -> int:
    """Count sign changes of the curve difference on a dense grid."""
    grid = np.linspace(lo, hi, n)
    d = np.sign(evaluate(grid, p1) - evaluate(grid, p2))
    d = d[d != 0]
    return int(np.count_nonzero(d[1:] != d[:-1]))
