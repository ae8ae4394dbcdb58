"""Fixed-step session orchestrator.

Every tick runs, in this order: operator, master-side controller (RTT
probing, deadband-gated motion packets), forward channel, slave and
environment (contact force, estimator, slave PC, backward packets),
backward channel, master rendering (TDPA master PC or MMT local model),
scheme selection and any pending handover, and finally trace recording.
A tick's row is labelled with the scheme in force after that handover.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from . import deadband as db
from .channel import (
    DelayChannel,
    DelayProfile,
    Direction,
    EnergyUpdate,
    ForceFeedback,
    ModelUpdate,
    MotionCmd,
    RttMonitor,
    RttProbe,
)
from .environment import HuntCrossleyParams, contact_force
from .mmt import LocalModel, StiffnessEstimate, master_force, update_local_model
from .qoe import DEFAULT_QOE, FourPLParams, HysteresisConfig, SchemeId, SchemeSelector
from .tdpa import EnergyLedger, PcState, Port, pc_master, pc_slave, update_po
from .trajectory import TrajectoryScript, master_position


class SchemeMode(str, Enum):
    FIXED_TDPA = "fixed_tdpa"
    FIXED_MMT = "fixed_mmt"
    AUTO = "auto"


@dataclass(frozen=True)
class DeadbandFloors:
    position: float = db.POSITION_FLOOR
    velocity: float = db.VELOCITY_FLOOR
    force: float = db.FORCE_FLOOR
    stiffness: float = db.STIFFNESS_FLOOR

    def __post_init__(self):
        if min(self.position, self.velocity, self.force, self.stiffness) < 0:
            raise ValueError("deadband floors must be non-negative")


@dataclass(frozen=True)
class MmtParams:
    initial_stiffness: float = 100.0
    window: int = 100
    min_contact_samples: int = 10
    max_force_jump: float = 0.02

    def __post_init__(self):
        if self.initial_stiffness < 0 or self.max_force_jump < 0:
            raise ValueError("MMT stiffness and force step must be non-negative")
        if self.window < 1 or self.min_contact_samples < 1:
            raise ValueError("MMT window sizes must be positive")


@dataclass(frozen=True)
class SessionConfig:
    duration: float = 20.0
    sample_period: float = 0.001
    scheme_mode: SchemeMode = SchemeMode.AUTO
    delay_profile: DelayProfile = field(default_factory=lambda: DelayProfile.constant(0.0))
    operator_script: TrajectoryScript = field(default_factory=TrajectoryScript)
    env_params: HuntCrossleyParams = field(default_factory=HuntCrossleyParams)
    dbp: float = 0.1
    rng_seed: int = 0
    qoe_params: Mapping[SchemeId, FourPLParams] = field(default_factory=lambda: dict(DEFAULT_QOE))
    hysteresis: HysteresisConfig = field(default_factory=HysteresisConfig)
    initial_scheme: SchemeId = SchemeId.TDPA_PD
    floors: DeadbandFloors = field(default_factory=DeadbandFloors)
    mmt: MmtParams = field(default_factory=MmtParams)
    probe_period: float = 0.1
    rtt_smoothing: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "scheme_mode", SchemeMode(self.scheme_mode))
        object.__setattr__(self, "initial_scheme", SchemeId(self.initial_scheme))
        object.__setattr__(self, "qoe_params", {SchemeId(k): v for k, v in self.qoe_params.items()})
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise ValueError("duration must be positive")
        if not (math.isfinite(self.sample_period) and self.sample_period > 0):
            raise ValueError("sample_period must be positive")
        if not 0 <= self.dbp < 1:
            raise ValueError("dbp must lie in [0, 1)")
        if not self.probe_period > 0:
            raise ValueError("probe_period must be positive")
        if self.scheme_mode is SchemeMode.AUTO and set(self.qoe_params) != set(SchemeId):
            raise ValueError("auto mode needs QoE parameters for both schemes")

    @property
    def n_ticks(self) -> int:
        return int(round(self.duration / self.sample_period))

    def starting_scheme(self) -> SchemeId:
        if self.scheme_mode is SchemeMode.FIXED_TDPA:
            return SchemeId.TDPA_PD
        if self.scheme_mode is SchemeMode.FIXED_MMT:
            return SchemeId.MMT_PD
        return self.initial_scheme


def handover(active: SchemeId, target: SchemeId, slave_contact: bool) -> SchemeId:
    """Scheme in force after a handover request; deferred while in contact."""
    if target is active or slave_contact:
        return active
    return target


# Per-tick trace columns, in CSV order first.
CSV_COLUMNS = (
    "t_ms", "x_m", "v_m", "f_m", "x_s", "f_s", "k_hat", "k_applied", "scheme",
    "pkts_fwd", "pkts_bwd", "e_diss_alpha", "e_diss_beta",
)
EXTRA_COLUMNS = (
    "v_s", "k_tx", "e_in_master", "e_out_master", "e_in_slave", "e_out_slave",
    "w_master", "w_slave", "alpha", "beta", "rtt_est",
)
DEADBAND_STREAMS = ("fwd_position", "fwd_velocity", "bwd_force", "bwd_stiffness")


@dataclass
class TraceLog:
    """Per-tick signals of one session plus run-level events.

    ``columns`` maps column names to arrays of length ``n_ticks``; the
    ``scheme`` column holds ``SchemeId`` values. ``deadband`` maps each
    coded stream to arrays ``src``, ``last_tx``, ``sent`` (NaN / False on
    ticks where the stream was idle) together with its ``dbp`` and
    ``floor``.
    """

    config: SessionConfig
    columns: dict[str, np.ndarray]
    deadband: dict[str, dict]
    switch_events: list[tuple[float, SchemeId, SchemeId]]

    def __len__(self):
        return len(self.columns["t_ms"])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def time(self) -> np.ndarray:
        return self.columns["t_ms"] / 1000.0

    def summary(self):
        from .metrics import summarize

        return summarize(self)


class _Session:
    def __init__(self, cfg: SessionConfig):
        self.cfg = cfg
        ts = cfg.sample_period
        self.rng = np.random.default_rng(cfg.rng_seed)
        self.channel = DelayChannel(cfg.delay_profile, ts)
        self.rtt = RttMonitor(cfg.delay_profile.initial_rtt, cfg.probe_period, cfg.rtt_smoothing)
        self.selector = SchemeSelector(params=cfg.qoe_params, hysteresis=cfg.hysteresis)
        self.active = cfg.starting_scheme()
        self.pending: SchemeId | None = None

        fl = cfg.floors
        self.pos_tx = db.DeadbandCodec(cfg.dbp, fl.position)
        self.vel_tx = db.DeadbandCodec(cfg.dbp, fl.velocity)
        self.force_tx = db.DeadbandCodec(cfg.dbp, fl.force)
        self.k_tx = db.DeadbandCodec(cfg.dbp, fl.stiffness)
        # Receiver holds; the slave starts co-located with the master, at rest.
        self.pos_rx = db.DeadbandCodec(cfg.dbp, fl.position)
        self.pos_rx.last_rx = master_position(0.0, cfg.operator_script)[0]
        self.vel_rx = db.DeadbandCodec(cfg.dbp, fl.velocity)
        self.force_rx = db.DeadbandCodec(cfg.dbp, fl.force)

        self.ledger = EnergyLedger(sample_period=ts)
        self.pc = PcState()
        self.estimator = StiffnessEstimate(
            k_hat=cfg.mmt.initial_stiffness,
            window_size=cfg.mmt.window,
            min_contact_samples=cfg.mmt.min_contact_samples,
        )
        self.model = LocalModel(
            k_target=cfg.mmt.initial_stiffness,
            k_applied=cfg.mmt.initial_stiffness,
            max_force_jump=cfg.mmt.max_force_jump,
        )
        self.pkts = {Direction.FORWARD: 0, Direction.BACKWARD: 0}
        self.switch_events: list[tuple[float, SchemeId, SchemeId]] = []

        n = cfg.n_ticks
        self.cols = {c: np.zeros(n) for c in CSV_COLUMNS + EXTRA_COLUMNS if c != "scheme"}
        self.cols["scheme"] = np.empty(n, dtype=object)
        self.cols["k_tx"] = np.zeros(n, dtype=bool)
        self.db = {
            name: {
                "src": np.full(n, np.nan),
                "last_tx": np.full(n, np.nan),
                "sent": np.zeros(n, dtype=bool),
                "dbp": cfg.dbp,
                "floor": floor,
            }
            for name, floor in zip(DEADBAND_STREAMS, (fl.position, fl.velocity, fl.force, fl.stiffness))
        }

    def _gate(self, name, codec, k, value):
        sent = codec.should_transmit(value)
        rec = self.db[name]
        rec["src"][k] = value
        rec["last_tx"][k] = codec.last_tx
        rec["sent"][k] = sent
        return sent

    def _send(self, direction, payload, t):
        self.channel.transmit(direction, payload, t)
        if not isinstance(payload, RttProbe):
            self.pkts[direction] += 1

    def step(self, k: int):
        cfg = self.cfg
        ts = cfg.sample_period
        t = k * ts
        tdpa = self.active is SchemeId.TDPA_PD
        led = self.ledger

        # operator
        x_m, v_m = master_position(t, cfg.operator_script)

        # master-side controller
        if self.rtt.probe_due(t):
            self._send(Direction.FORWARD, RttProbe(sent_at=t), t)
        send_pos = self._gate("fwd_position", self.pos_tx, k, x_m)
        send_vel = self._gate("fwd_velocity", self.vel_tx, k, v_m)
        if send_pos or send_vel:
            self.pos_tx.last_tx, self.vel_tx.last_tx = x_m, v_m
            self.db["fwd_position"]["last_tx"][k] = x_m
            self.db["fwd_velocity"]["last_tx"][k] = v_m
            energy = led.e_in_master if tdpa else None
            self._send(Direction.FORWARD, MotionCmd(x_m, v_m, energy), t)

        # forward channel -> slave
        for pkt in self.channel.deliver(Direction.FORWARD, t):
            p = pkt.payload
            if isinstance(p, MotionCmd):
                self.pos_rx.reconstruct(p.position)
                self.vel_rx.reconstruct(p.velocity)
                if p.energy is not None:
                    led.receive_master_energy(p.energy)
            elif isinstance(p, EnergyUpdate):
                led.receive_master_energy(p.energy)
            elif isinstance(p, RttProbe):
                self._send(Direction.BACKWARD, RttProbe(p.sent_at, echoed_at=t), t)
        x_s = self.pos_rx.reconstruct()
        v_s = self.vel_rx.reconstruct()

        f_s = contact_force(x_s, v_s, cfg.env_params, self.rng)
        k_hat = self.estimator.push(x_s, f_s)
        k_sent = False
        if tdpa:
            led.commit_slave_output()
            update_po(Port.SLAVE, -f_s, v_s, led, defer_output=True)
            f_back = pc_slave(v_s, f_s, led, self.pc)
            if self._gate("bwd_force", self.force_tx, k, f_back):
                self._send(Direction.BACKWARD, ForceFeedback(f_back, led.e_in_slave), t)
        else:
            self.pc.alpha = 0.0
            k_sent = self._gate("bwd_stiffness", self.k_tx, k, k_hat)
            if k_sent:
                self._send(Direction.BACKWARD, ModelUpdate(k_hat), t)

        # backward channel -> master
        k_received = None
        echoed = False
        for pkt in self.channel.deliver(Direction.BACKWARD, t):
            p = pkt.payload
            if isinstance(p, ForceFeedback):
                self.force_rx.reconstruct(p.force)
                led.receive_slave_energy(p.energy)
            elif isinstance(p, EnergyUpdate):
                led.receive_slave_energy(p.energy)
            elif isinstance(p, ModelUpdate):
                k_received = p.stiffness
            elif isinstance(p, RttProbe):
                self.rtt.on_echo(p, t)
                echoed = True

        # master rendering
        if tdpa:
            f_rx = self.force_rx.reconstruct()
            update_po(Port.MASTER, f_rx, v_m, led)
            f_m = -pc_master(-f_rx, v_m, led, self.pc)
        else:
            self.pc.beta = 0.0
            update_local_model(k_received, self.model, x_m)
            f_m = master_force(x_m, self.model)

        # scheme decision and handover
        before = self.active
        if cfg.scheme_mode is SchemeMode.AUTO:
            if echoed:
                target = self.selector.decide(self.rtt.measure_rtt(t) * 1000.0, self.active)
                self.pending = target if target is not self.active else None
            if self.pending is not None:
                self.active = handover(self.active, self.pending, slave_contact=x_s > 0)
                if self.active is not before:
                    self._enter(self.active)
                    self.switch_events.append((t, before, self.active))
                    self.pending = None

        c = self.cols
        c["t_ms"][k] = t * 1000.0
        c["x_m"][k], c["v_m"][k], c["f_m"][k] = x_m, v_m, f_m
        c["x_s"][k], c["v_s"][k], c["f_s"][k] = x_s, v_s, f_s
        c["k_hat"][k], c["k_tx"][k], c["k_applied"][k] = k_hat, k_sent, self.model.k_applied
        c["scheme"][k] = self.active
        c["pkts_fwd"][k] = self.pkts[Direction.FORWARD]
        c["pkts_bwd"][k] = self.pkts[Direction.BACKWARD]
        c["e_in_master"][k], c["e_out_master"][k] = led.e_in_master, led.e_out_master
        c["e_in_slave"][k], c["e_out_slave"][k] = led.e_in_slave, led.e_out_slave
        c["e_diss_alpha"][k], c["e_diss_beta"][k] = led.e_diss_alpha, led.e_diss_beta
        c["w_master"][k], c["w_slave"][k] = led.master_balance(), led.slave_balance()
        c["alpha"][k], c["beta"][k] = self.pc.alpha, self.pc.beta
        c["rtt_est"][k] = self.rtt.measure_rtt(t)

    def _enter(self, scheme: SchemeId):
        # First sample of the incoming scheme's backward stream always goes out.
        if scheme is SchemeId.TDPA_PD:
            self.force_tx.reset_sender()
        else:
            self.k_tx.reset_sender()


def run_scenario(config: SessionConfig) -> TraceLog:
    """Simulate one session and return its trace."""
    if not isinstance(config, SessionConfig):
        raise TypeError("config must be a SessionConfig")
    session = _Session(config)
    for k in range(config.n_ticks):
        session.step(k)
    return TraceLog(config, session.cols, session.db, session.switch_events)
